//! One job per corpus file, run in parallel; each writes its own document.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::JobConfig;
use crate::execute::execute;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchItem {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub error: Option<String>,
    pub warnings: Vec<String>,
}

/// Regular, non-hidden files of `dir` in name order.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let entry = entry?;
        let hidden = entry.file_name().to_string_lossy().starts_with('.');
        if entry.file_type()?.is_file() && !hidden {
            files.push(entry.path());
        }
    }
    files.sort();
    Ok(files)
}

fn run_one(template: &JobConfig, input: &Path, out_dir: &Path) -> BatchItem {
    let mut job = template.clone();
    job.inputs = vec![input.to_path_buf()];
    job.output = None;
    let command = template.command.map(|c| c.name()).unwrap_or("job");
    let name = input.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let output = out_dir.join(format!("{name}.{command}.json"));
    let result = job.validate().and_then(|r| execute(&r)).and_then(|outcome| {
        fs::write(&output, outcome.render()).with_context(|| format!("writing {}", output.display()))?;
        Ok(outcome.warnings)
    });
    match result {
        Ok(warnings) => BatchItem { input: input.to_path_buf(), output: Some(output), error: None, warnings },
        Err(e) => BatchItem {
            input: input.to_path_buf(),
            output: None,
            error: Some(format!("{e:#}")),
            warnings: Vec::new(),
        },
    }
}

/// Runs `template` on every file of `dir`, writing `NAME.COMMAND.json` into
/// `out_dir`. Items come back in file order whatever the scheduling.
pub fn run_batch(template: &JobConfig, dir: &Path, out_dir: &Path) -> Result<Vec<BatchItem>> {
    let files = corpus_files(dir)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    Ok(files.par_iter().map(|f| run_one(template, f, out_dir)).collect())
}

pub fn summary(items: &[BatchItem]) -> Value {
    let failed = items.iter().filter(|i| i.error.is_some()).count();
    json!({
        "files": items.len(),
        "failed": failed,
        "items": items
            .iter()
            .map(|i| json!({
                "input": i.input.display().to_string(),
                "output": i.output.as_ref().map(|p| p.display().to_string()),
                "error": i.error,
            }))
            .collect::<Vec<_>>(),
    })
}
