use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use boij_cli::batch::{run_batch, summary};
use boij_cli::config::{Command, JobConfig};
use boij_cli::corpus::{self, CorpusSpec};
use boij_cli::execute::{canonical, execute};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "boij", version, about = "Exact Boij-Soderberg computations on Betti and cohomology tables")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Recognize a pure table, build a Herzog-Kuhl diagram, or enumerate degree sequences.
    Pure(JobConfig),
    /// Decompose a table into pure diagrams (greedy for constant codim, else LP).
    Decompose(JobConfig),
    /// Cone membership with a witness or a separating functional.
    Member(JobConfig),
    /// Membership in the cone of short complexes of length --dim.
    Short(JobConfig),
    /// Multiplicity bounds for a perfect module's table.
    Bounds(JobConfig),
    /// Hilbert series of a module, or of a table over k[x_1..x_d].
    Hilb(JobConfig),
    /// Betti table of a monomial module from Koszul homology.
    Koszul(JobConfig),
    /// Dimension and codimension of a monomial module.
    Dims(JobConfig),
    /// Multiplicity with the Koszul Euler-characteristic check.
    Mult(JobConfig),
    /// Cohomology table of a line bundle or Frobenius pushforward on P^m.
    Cohom(JobConfig),
    /// Finite-horizon lim Ulrich check.
    Limulrich(JobConfig),
    /// Finite-horizon u-trivial check.
    Utrivial(JobConfig),
    /// Run a job described by a JSON configuration file.
    Run { config: PathBuf },
    /// Run one command over every file of a directory in parallel.
    Batch {
        #[arg(long, value_enum)]
        command: Command,
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        job: JobConfig,
    },
    /// Write a seeded corpus of random monomial modules.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[arg(long, default_value_t = 6)]
        max_gens: usize,
        /// Give every module a free summand.
        #[arg(long)]
        free_summand: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn job_of(cmd: &Cmd) -> Option<JobConfig> {
    let (command, job) = match cmd {
        Cmd::Pure(j) => (Command::Pure, j),
        Cmd::Decompose(j) => (Command::Decompose, j),
        Cmd::Member(j) => (Command::Member, j),
        Cmd::Short(j) => (Command::Short, j),
        Cmd::Bounds(j) => (Command::Bounds, j),
        Cmd::Hilb(j) => (Command::Hilb, j),
        Cmd::Koszul(j) => (Command::Koszul, j),
        Cmd::Dims(j) => (Command::Dims, j),
        Cmd::Mult(j) => (Command::Mult, j),
        Cmd::Cohom(j) => (Command::Cohom, j),
        Cmd::Limulrich(j) => (Command::Limulrich, j),
        Cmd::Utrivial(j) => (Command::Utrivial, j),
        _ => return None,
    };
    Some(JobConfig { command: Some(command), ..job.clone() })
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn run_job(job: JobConfig) -> Result<ExitCode> {
    let resolved = job.validate()?;
    let outcome = execute(&resolved)?;
    for w in &outcome.warnings {
        log::warn!("{w}");
    }
    emit(&outcome.render(), job.output.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(job) = job_of(&cli.command) {
        return run_job(job);
    }
    match cli.command {
        Cmd::Run { config } => {
            let text =
                fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let job: JobConfig =
                serde_json::from_str(&text).with_context(|| format!("parsing job {}", config.display()))?;
            run_job(job)
        }
        Cmd::Batch { command, dir, out, mut job } => {
            job.command = Some(command);
            if !job.inputs.is_empty() {
                anyhow::bail!("batch takes its inputs from --dir");
            }
            let items = run_batch(&job, &dir, &out)?;
            for item in &items {
                for w in &item.warnings {
                    log::warn!("{w}");
                }
                if let Some(e) = &item.error {
                    log::error!("{}: {e}", item.input.display());
                }
            }
            let mut text = serde_json::to_string_pretty(&canonical(&summary(&items)))?;
            text.push('\n');
            emit(&text, None)?;
            let failed = items.iter().any(|i| i.error.is_some());
            Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
        Cmd::Corpus { seed, count, max_dim, max_degree, max_gens, free_summand, out } => {
            let spec = CorpusSpec { seed, count, max_dim, max_degree, max_gens, free_summand };
            let paths = corpus::write(&out, &corpus::generate(&spec))?;
            log::info!("wrote {} modules to {}", paths.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }
        _ => unreachable!("job commands handled above"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
