use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use fewlab::{run, ExperimentConfig, ExperimentKind};

#[derive(Parser)]
#[command(
    name = "fewlab",
    version,
    about = "Expected positive zeros of random fewnomial systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per estimate (overrides the config file).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Output directory (overrides the config file).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a built-in sweep.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        /// Degrees for the kac and kostlan sweeps.
        #[arg(long, value_delimiter = ',', default_values_t = [10u32, 100, 1000])]
        degrees: Vec<u32>,
        /// Variable counts for the bounds sweep.
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3])]
        ns: Vec<u64>,
        /// The bounds sweep covers t = n ..= n + t_extra.
        #[arg(long, default_value_t = 4)]
        t_extra: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKind {
    Kac,
    Kostlan,
    Bounds,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    let mut cfg = match cli.command {
        Command::Run { config } => ExperimentConfig::load(&config)?,
        Command::Sweep {
            kind,
            degrees,
            ns,
            t_extra,
        } => {
            let mut cfg = ExperimentConfig::new(match kind {
                SweepKind::Kac => ExperimentKind::KacSweep,
                SweepKind::Kostlan => ExperimentKind::KostlanSweep,
                SweepKind::Bounds => ExperimentKind::BoundSweep,
            });
            cfg.degrees = degrees;
            cfg.ns = ns;
            cfg.t_extra = t_extra;
            cfg.trials = 10_000;
            cfg
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = cli.trials {
        cfg.trials = trials;
    }
    if let Some(out) = cli.out {
        cfg.output = Some(out);
    }
    let dir = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("fewlab-out/{}", cfg.kind.name())));
    let report = run(&cfg, cli.jobs)?;
    report
        .write(&dir)
        .with_context(|| format!("writing results to {}", dir.display()))?;
    for v in &report.body.verdicts {
        println!(
            "{} {} {}: {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.row,
            v.name,
            v.detail
        );
    }
    println!(
        "{} rows, {} verdicts, {:.2}s -> {}",
        report.body.rows.len(),
        report.body.verdicts.len(),
        report.wall_time_seconds,
        dir.display()
    );
    Ok(report.body.passed())
}
