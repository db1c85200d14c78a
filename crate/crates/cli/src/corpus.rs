//! Seeded random monomial modules, written as module documents.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use boij_core::io::module_doc;
use boij_core::koszul::{minimize, MonomialModule, Summand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub max_dim: usize,
    pub max_degree: u32,
    pub max_gens: usize,
    /// Add a free summand `S(-s)` to every module, forcing `dim M = d`.
    pub free_summand: bool,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self { seed: 0, count: 200, max_dim: 3, max_degree: 4, max_gens: 6, free_summand: false }
    }
}

fn random_monomial(rng: &mut ChaCha8Rng, d: usize, max_degree: u32) -> Vec<u32> {
    let total = rng.gen_range(1..=max_degree);
    let mut g = vec![0u32; d];
    for _ in 0..total {
        g[rng.gen_range(0..d)] += 1;
    }
    g
}

/// A third of the ideals contain a power of every variable, so that
/// finite-length quotients (codim = d) are well represented.
fn random_summand(rng: &mut ChaCha8Rng, d: usize, spec: &CorpusSpec, twist: i64) -> Summand {
    let k = rng.gen_range(1..=spec.max_gens);
    let mut gens: Vec<Vec<u32>> = (0..k).map(|_| random_monomial(rng, d, spec.max_degree)).collect();
    if rng.gen_bool(1.0 / 3.0) {
        for v in 0..d {
            let mut g = vec![0; d];
            g[v] = rng.gen_range(1..=spec.max_degree);
            gens.push(g);
        }
    }
    Summand { gens: minimize(&gens).0, twist }
}

/// `d` is drawn with weight proportional to itself.
fn random_dim(rng: &mut ChaCha8Rng, max_dim: usize) -> usize {
    let total = max_dim * (max_dim + 1) / 2;
    let mut r = rng.gen_range(0..total);
    for d in 1..=max_dim {
        if r < d {
            return d;
        }
        r -= d;
    }
    max_dim
}

/// Mostly cyclic quotients `S/I` generated in degree 0; about one in five
/// gets a second, twisted summand.
pub fn random_module(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> MonomialModule {
    let d = random_dim(rng, spec.max_dim);
    let mut summands = vec![random_summand(rng, d, spec, 0)];
    if rng.gen_bool(0.2) {
        let twist = rng.gen_range(-1..=2);
        summands.push(random_summand(rng, d, spec, twist));
    }
    if spec.free_summand {
        let twist = rng.gen_range(0..=2);
        summands.push(Summand { gens: Vec::new(), twist });
    }
    MonomialModule::new(d, summands).expect("generated modules are valid")
}

pub fn generate(spec: &CorpusSpec) -> Vec<MonomialModule> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    (0..spec.count).map(|_| random_module(&mut rng, spec)).collect()
}

/// Writes `module-0000.json`, `module-0001.json`, ... and returns the paths.
pub fn write(dir: &Path, modules: &[MonomialModule]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut paths = Vec::with_capacity(modules.len());
    for (k, module) in modules.iter().enumerate() {
        let path = dir.join(format!("module-{k:04}.json"));
        let mut text = serde_json::to_string(&module_doc(module)).expect("module documents serialize");
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        paths.push(path);
    }
    Ok(paths)
}
