//! Ground-truth invariants of monomial modules `M = (+)_k (S/I_k)(-s_k)`
//! over `S = Q[x_1..x_d]`.
//!
//! Betti numbers are Koszul homology ranks, `beta_{i,j}(M) = dim H_i(x; M)_j`,
//! obtained by exact elimination on monomial bases. The Koszul complex of a
//! monomial quotient is `N^d`-graded, so each degree-`j` piece splits into
//! its multidegrees `|alpha| = j` and each block is eliminated separately.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::hilbert::{HilbertSeries, LaurentPoly};
use crate::linalg;
use crate::tables::{rat, BettiTable, Rational};

/// Default ceiling on the total degree the oracle is willing to scan.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoszulError {
    #[error("polynomial ring needs at least one variable")]
    NoVariables,
    #[error("module has no summands")]
    EmptyModule,
    #[error("exponent vector {exponents:?} has length {got}, expected {expected}")]
    WrongLength { exponents: Vec<u32>, expected: usize, got: usize },
    #[error("summand {0} has the unit ideal and is zero")]
    UnitIdeal(usize),
    #[error("generators of summand {0} are not minimal")]
    NotMinimal(usize),
    #[error("degree bound {required} exceeds the cap {cap}")]
    DegreeCapExceeded { required: u32, cap: u32 },
    #[error("internal invariant failed: {0}")]
    Invariant(String),
}

/// Monomial exponent vector.
pub type Exponents = Vec<u32>;

/// `(S/I)(-twist)`: generated in degree `twist`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Summand {
    pub gens: Vec<Exponents>,
    pub twist: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialModule {
    d: usize,
    summands: Vec<Summand>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn in_ideal(gens: &[Exponents], monomial: &[u32]) -> bool {
    gens.iter().any(|g| divides(g, monomial))
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Minimal generators of the ideal spanned by `gens`, in input order, plus
/// the generators that were dropped.
pub fn minimize(gens: &[Exponents]) -> (Vec<Exponents>, Vec<Exponents>) {
    let mut kept: Vec<Exponents> = Vec::new();
    let mut dropped = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        let redundant = gens.iter().enumerate().any(|(m, h)| m != k && divides(h, g) && (h != g || m < k));
        if redundant {
            dropped.push(g.clone());
        } else {
            kept.push(g.clone());
        }
    }
    (kept, dropped)
}

impl MonomialModule {
    /// Validates shape and minimality.
    pub fn new(d: usize, summands: Vec<Summand>) -> Result<Self, KoszulError> {
        if d == 0 {
            return Err(KoszulError::NoVariables);
        }
        if summands.is_empty() {
            return Err(KoszulError::EmptyModule);
        }
        for (k, s) in summands.iter().enumerate() {
            for g in &s.gens {
                if g.len() != d {
                    return Err(KoszulError::WrongLength { exponents: g.clone(), expected: d, got: g.len() });
                }
                if g.iter().all(|&x| x == 0) {
                    return Err(KoszulError::UnitIdeal(k));
                }
            }
            if !minimize(&s.gens).1.is_empty() {
                return Err(KoszulError::NotMinimal(k));
            }
        }
        Ok(Self { d, summands })
    }

    /// `S/I` with the given generators, minimized first.
    pub fn quotient(d: usize, gens: Vec<Exponents>) -> Result<Self, KoszulError> {
        Self::new(d, vec![Summand { gens: minimize(&gens).0, twist: 0 }])
    }

    /// The free module `S`.
    pub fn free(d: usize) -> Result<Self, KoszulError> {
        Self::new(d, vec![Summand { gens: Vec::new(), twist: 0 }])
    }

    /// `S/(x_1, ..., x_c)`.
    pub fn coordinate_quotient(d: usize, c: usize) -> Result<Self, KoszulError> {
        let gens = (0..c).map(|k| (0..d).map(|m| u32::from(m == k)).collect()).collect();
        Self::quotient(d, gens)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// `M (+) N`.
    pub fn direct_sum(&self, other: &MonomialModule) -> Result<Self, KoszulError> {
        let mut summands = self.summands.clone();
        summands.extend(other.summands.iter().cloned());
        Self::new(self.d, summands)
    }

    /// `M(-s)`: every summand generated `s` degrees higher.
    pub fn twisted(&self, s: i64) -> Self {
        Self {
            d: self.d,
            summands: self
                .summands
                .iter()
                .map(|x| Summand { gens: x.gens.clone(), twist: x.twist + s })
                .collect(),
        }
    }

    /// A single summand as its own module.
    pub fn summand_module(&self, k: usize) -> Self {
        Self { d: self.d, summands: vec![self.summands[k].clone()] }
    }

    /// True when every summand is generated in degree zero and `M` is cyclic.
    pub fn is_cyclic_in_degree_zero(&self) -> bool {
        self.summands.len() == 1 && self.summands[0].twist == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KoszulOptions {
    /// Refuse to scan past this total degree.
    pub degree_cap: u32,
    /// Scan only through this degree instead of the Taylor bound.
    pub degree_override: Option<u32>,
}

impl Default for KoszulOptions {
    fn default() -> Self {
        Self { degree_cap: DEFAULT_DEGREE_CAP, degree_override: None }
    }
}

/// `deg lcm(gens) + d`; Betti numbers of `S/I` live at lcms of subsets of
/// the generators, so nothing sits past `deg lcm`.
pub fn taylor_degree_bound(d: usize, gens: &[Exponents]) -> u32 {
    let lcm: Vec<u32> = (0..d).map(|k| gens.iter().map(|g| g[k]).max().unwrap_or(0)).collect();
    degree(&lcm) + d as u32
}

/// Betti table of `M` as ranks of Koszul homology.
pub fn koszul_betti(module: &MonomialModule) -> Result<BettiTable, KoszulError> {
    koszul_betti_with(module, &KoszulOptions::default())
}

pub fn koszul_betti_with(
    module: &MonomialModule,
    options: &KoszulOptions,
) -> Result<BettiTable, KoszulError> {
    let mut total = BettiTable::zero();
    for summand in module.summands() {
        let bound = taylor_degree_bound(module.d(), &summand.gens);
        let scan = match options.degree_override {
            Some(o) => {
                if o < bound {
                    log::warn!("degree override {o} is below the Taylor bound {bound}");
                }
                o
            }
            None => bound,
        };
        if scan > options.degree_cap {
            return Err(KoszulError::DegreeCapExceeded { required: scan, cap: options.degree_cap });
        }
        let table = cyclic_koszul_betti(module.d(), &summand.gens, scan);
        total = total.add(&table.shift_degrees(summand.twist));
    }
    Ok(total)
}

/// Table of `S/I` through total degree `max_degree`.
fn cyclic_koszul_betti(d: usize, gens: &[Exponents], max_degree: u32) -> BettiTable {
    let mut counts: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    let mut alpha = vec![0u32; d];
    for_each_multidegree(&mut alpha, 0, max_degree, &mut |alpha| {
        for (i, h) in multidegree_homology(d, gens, alpha).into_iter().enumerate() {
            if h > 0 {
                *counts.entry((i as i64, degree(alpha) as i64)).or_default() += h as i64;
            }
        }
    });
    BettiTable::from_entries(counts.into_iter().map(|(k, v)| (k, rat(v))))
}

fn for_each_multidegree(alpha: &mut Vec<u32>, k: usize, budget: u32, f: &mut dyn FnMut(&[u32])) {
    if k == alpha.len() {
        f(alpha);
        return;
    }
    for v in 0..=budget {
        alpha[k] = v;
        for_each_multidegree(alpha, k + 1, budget - v, f);
    }
    alpha[k] = 0;
}

/// `dim H_i(x; S/I)_alpha` for `i = 0..=d`.
fn multidegree_homology(d: usize, gens: &[Exponents], alpha: &[u32]) -> Vec<usize> {
    // K_i at alpha: wedge basis e_sigma (|sigma| = i) times x^{alpha - sigma},
    // kept when alpha - sigma >= 0 and the monomial survives in S/I.
    let support = (0..d).filter(|&k| alpha[k] > 0).fold(0u32, |m, k| m | 1 << k);
    let mut basis: Vec<Vec<u32>> = vec![Vec::new(); d + 1];
    let mut shifted = alpha.to_vec();
    for sigma in 0u32..(1 << d) {
        if sigma & !support != 0 {
            continue;
        }
        for k in 0..d {
            shifted[k] = alpha[k] - (sigma >> k & 1);
        }
        if !in_ideal(gens, &shifted) {
            basis[sigma.count_ones() as usize].push(sigma);
        }
    }
    if basis.iter().all(Vec::is_empty) {
        return vec![0; d + 1];
    }
    // ranks[i] = rank of d_i: K_i -> K_{i-1}
    let mut ranks = vec![0usize; d + 2];
    for i in 1..=d {
        if basis[i].is_empty() || basis[i - 1].is_empty() {
            continue;
        }
        let index: BTreeMap<u32, usize> = basis[i - 1].iter().enumerate().map(|(r, &s)| (s, r)).collect();
        let mut rows = vec![vec![BigInt::zero(); basis[i].len()]; basis[i - 1].len()];
        for (c, &sigma) in basis[i].iter().enumerate() {
            for k in 0..d {
                if sigma >> k & 1 == 0 {
                    continue;
                }
                let tau = sigma & !(1 << k);
                if let Some(&r) = index.get(&tau) {
                    let below = (sigma & ((1 << k) - 1)).count_ones();
                    rows[r][c] = if below % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                }
            }
        }
        ranks[i] = linalg::rank(&rows);
    }
    (0..=d).map(|i| basis[i].len() - ranks[i] - ranks[i + 1]).collect()
}

/// Numerator of `Hilb(S/I)` over `(1 - t)^d`, by the pivot recursion
/// `N(I) = N(I - g) - t^{deg g} N((I - g) : g)`.
fn quotient_numerator(gens: &[Exponents]) -> LaurentPoly {
    let Some((last, rest)) = gens.split_last() else {
        return LaurentPoly::one();
    };
    if last.iter().all(|&x| x == 0) {
        return LaurentPoly::zero();
    }
    let colon: Vec<Exponents> =
        rest.iter().map(|h| h.iter().zip(last).map(|(a, b)| a.saturating_sub(*b)).collect()).collect();
    let colon = minimize(&colon).0;
    let without = quotient_numerator(rest);
    let inner = quotient_numerator(&colon).shift(degree(last) as i64);
    without.sub(&inner)
}

/// Hilbert series of `M` in canonical form.
pub fn monomial_hilbert(module: &MonomialModule) -> HilbertSeries {
    let d = module.d() as u32;
    module.summands().iter().fold(HilbertSeries::new(LaurentPoly::zero(), 0), |acc, s| {
        acc.add(&HilbertSeries::new(quotient_numerator(&s.gens).shift(s.twist), d))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimCodim {
    pub dim: u32,
    pub codim: u32,
}

/// Size of a smallest set of variables meeting the support of every generator.
pub fn min_vertex_cover(d: usize, gens: &[Exponents]) -> u32 {
    let supports: Vec<u32> =
        gens.iter().map(|g| (0..d).filter(|&k| g[k] > 0).fold(0u32, |m, k| m | 1 << k)).collect();
    (0u32..(1 << d))
        .filter(|cover| supports.iter().all(|s| s & cover != 0))
        .map(u32::count_ones)
        .min()
        .expect("the full variable set covers every generator")
}

/// `dim M` from the Hilbert pole, cross-checked against the height of the
/// radical of each annihilator.
pub fn dim_codim(module: &MonomialModule) -> Result<DimCodim, KoszulError> {
    let d = module.d() as u32;
    let dim = monomial_hilbert(module).pole_order();
    let codim_by_cover = module
        .summands()
        .iter()
        .map(|s| min_vertex_cover(module.d(), &s.gens))
        .min()
        .expect("modules have summands");
    if dim + codim_by_cover != d {
        return Err(KoszulError::Invariant(format!(
            "Hilbert pole gives dim {dim} but vertex cover gives codim {codim_by_cover} with d = {d}"
        )));
    }
    Ok(DimCodim { dim, codim: d - dim })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandEuler {
    pub dim: u32,
    /// `sum_i (-1)^i rank H_i(x; summand)`.
    pub chi: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub e: Rational,
    pub dim: u32,
    /// Koszul Euler characteristic, present when `dim M = d`.
    pub euler: Option<Rational>,
    pub summands: Vec<SummandEuler>,
}

/// Alternating sum of all Koszul homology ranks.
pub fn koszul_euler_characteristic(table: &BettiTable) -> Rational {
    table.iter().fold(
        Rational::zero(),
        |acc, ((i, _), v)| {
            if i.rem_euclid(2) == 0 {
                acc + v
            } else {
                acc - v
            }
        },
    )
}

/// `e(M) = f_M(1)`, and when `dim M = d` the Koszul Euler characteristic,
/// which must agree; summands of lower dimension must contribute zero.
pub fn multiplicity(module: &MonomialModule) -> Result<MultiplicityReport, KoszulError> {
    multiplicity_with(module, &KoszulOptions::default())
}

pub fn multiplicity_with(
    module: &MonomialModule,
    options: &KoszulOptions,
) -> Result<MultiplicityReport, KoszulError> {
    let d = module.d() as u32;
    let series = monomial_hilbert(module);
    let dim = series.pole_order();
    let e = series.multiplicity();
    let mut summands = Vec::with_capacity(module.summands().len());
    let mut total = Rational::zero();
    for k in 0..module.summands().len() {
        let part = module.summand_module(k);
        let part_dim = monomial_hilbert(&part).pole_order();
        let chi = koszul_euler_characteristic(&koszul_betti_with(&part, options)?);
        if part_dim < d && !chi.is_zero() {
            return Err(KoszulError::Invariant(format!(
                "summand {k} has dim {part_dim} < {d} but Euler characteristic {chi}"
            )));
        }
        total += &chi;
        summands.push(SummandEuler { dim: part_dim, chi });
    }
    let euler = if dim == d {
        if total != e {
            return Err(KoszulError::Invariant(format!(
                "Euler characteristic {total} differs from multiplicity {e}"
            )));
        }
        Some(total)
    } else {
        None
    };
    Ok(MultiplicityReport { e, dim, euler, summands })
}
