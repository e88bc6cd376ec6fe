use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::anyhow;
use clap::{Parser, Subcommand};
use log::info;
use rayon::prelude::*;

use serilin_cli::presets::list_presets;
use serilin_cli::{load_target, output_root, run_config, RunError, OUT_ENV};

#[derive(Parser)]
#[command(
    name = "serilin",
    version,
    about = "Run series-linearization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bundled presets.
    List,
    /// Run presets or config files.
    Run {
        /// Preset names or paths to JSON configs.
        #[arg(required = true)]
        targets: Vec<String>,
        /// Output root (overridden by SERILIN_OUT).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace the seed of every target.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads shared by all targets.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn run_one(target: &str, out: Option<&PathBuf>, seed: Option<u64>) -> Result<(), RunError> {
    let mut config = load_target(target)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    let env = std::env::var(OUT_ENV).ok();
    let root = output_root(env.as_deref(), out.map(PathBuf::as_path), &config);
    let report = run_config(&config, &root)?;
    info!("{} finished in {:.2}s", config.name, report.wall_time);
    println!("{}", report.dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for (name, description) in list_presets() {
                println!("{name}\t{description}");
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            targets,
            out,
            seed,
            jobs,
        } => {
            let pool = match rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
            {
                Ok(p) => p,
                Err(e) => {
                    let err = RunError::io(anyhow!(e));
                    eprintln!("{}", err.to_json("--jobs"));
                    return ExitCode::from(err.kind.exit_code());
                }
            };
            let results: Vec<(String, Result<(), RunError>)> = pool.install(|| {
                targets
                    .par_iter()
                    .map(|t| (t.clone(), run_one(t, out.as_ref(), seed)))
                    .collect()
            });
            // The first failing target decides the exit status.
            let mut code = 0;
            for (target, result) in &results {
                if let Err(e) = result {
                    eprintln!("{}", e.to_json(target));
                    if code == 0 {
                        code = e.kind.exit_code();
                    }
                }
            }
            ExitCode::from(code)
        }
    }
}
