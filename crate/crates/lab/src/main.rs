use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pathcons_lab::output::{Artifacts, Verb};
use pathcons_lab::{builtin, resolve, run_experiment, run_sweep, ExperimentConfig, LabError};

#[derive(Parser)]
#[command(name = "pathcons", version, about = "Path-consistent finite-volume experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory (default: out/<experiment name>).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scheme on every mesh and write profiles and diagnostics.
    Run {
        /// Config file, manifest, or built-in experiment name.
        config: String,
    },
    /// Trace the exact Hugoniot curve and the numerical curve on each mesh.
    Sweep { config: String },
    /// List the built-in experiments.
    ListExperiments,
    /// Check a config without running it.
    Validate { config: String },
}

fn load(arg: &str, seed: Option<u64>) -> Result<(ExperimentConfig, Option<Verb>), LabError> {
    let (mut cfg, verb) = resolve(arg)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok((cfg, verb))
}

fn write(cli: &Cli, cfg: &ExperimentConfig, artifacts: &Artifacts) -> Result<PathBuf, LabError> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    artifacts.write(&dir)?;
    Ok(dir)
}

fn execute(cli: &Cli) -> Result<bool, LabError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| LabError::Runtime(e.to_string()))?;
    }
    match &cli.command {
        Command::ListExperiments => {
            for name in builtin::names() {
                let cfg = builtin::load(name)?;
                println!("{name:<22} {}", cfg.description);
            }
            Ok(true)
        }
        Command::Validate { config } => {
            let (cfg, _) = load(config, cli.seed)?;
            println!("{}: ok", cfg.name);
            Ok(true)
        }
        Command::Run { config } => {
            let (cfg, verb) = load(config, cli.seed)?;
            if verb == Some(Verb::Sweep) {
                return sweep(cli, &cfg);
            }
            let out = run_experiment(&cfg)?;
            let dir = write(cli, &cfg, &out.artifacts)?;
            for r in &out.report.runs {
                let status = match &r.error {
                    None => "ok".to_string(),
                    Some(e) => format!("failed: {e}"),
                };
                println!("{} m={} t={} steps={} {status}", r.scheme, r.cells, r.t_final, r.steps);
            }
            println!("wrote {}", dir.display());
            Ok(!out.failed())
        }
        Command::Sweep { config } => {
            let (cfg, _) = load(config, cli.seed)?;
            sweep(cli, &cfg)
        }
    }
}

fn sweep(cli: &Cli, cfg: &ExperimentConfig) -> Result<bool, LabError> {
    let out = run_sweep(cfg)?;
    let dir = write(cli, cfg, &out.artifacts)?;
    for c in &out.report.curves {
        let eps = c.epsilon.map_or(String::new(), |e| format!(" eps={e}"));
        let dist = c.distance_to_exact.map_or("n/a".into(), |d| format!("{d:.3e}"));
        println!(
            "{}{eps} m={} points={} failures={} distance_to_exact={dist}",
            c.scheme,
            c.cells,
            c.points.len(),
            c.failures.len()
        );
    }
    for e in &out.report.distance_errors {
        eprintln!("warning: {e}");
    }
    println!("wrote {}", dir.display());
    Ok(out.report.curves.iter().all(|c| c.failures.is_empty()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
