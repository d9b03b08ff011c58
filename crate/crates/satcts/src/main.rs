use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use satcts::plotdata::emit_plot_data;
use satcts::report::theory_report;
use satcts::{run_campaign, PolicyKind, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "satcts",
    version,
    about = "Satisficing beam and rate adaptation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (policy, seed) pair and write CSV artifacts.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated seed list.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        /// Comma-separated subset of SAT-CTS, CTS, CUCB.
        #[arg(long, value_delimiter = ',')]
        policies: Option<Vec<PolicyKind>>,
        #[arg(long, value_enum)]
        reset_priors: Option<Toggle>,
    },
    /// Gap profile, bound constants and a bound check.
    Theory {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Long-format plot CSV from an artifact directory.
    Plotdata { dir: PathBuf },
}

fn load(path: &Path, out: Option<PathBuf>) -> satcts::Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::load(path)?;
    if let Some(out) = out {
        cfg.out_dir = out;
    }
    Ok(cfg)
}

fn execute(cmd: Command) -> Result<(), (Option<PathBuf>, satcts::Error)> {
    match cmd {
        Command::Run {
            config,
            out,
            seeds,
            policies,
            reset_priors,
        } => {
            let tag = |e| (Some(config.clone()), e);
            let mut cfg = load(&config, out).map_err(tag)?;
            if let Some(s) = seeds {
                cfg.seeds = s;
            }
            if let Some(p) = policies {
                cfg.policies = p;
            }
            if let Some(r) = reset_priors {
                cfg.reset_priors = matches!(r, Toggle::On);
            }
            let c = run_campaign(&cfg).map_err(tag)?;
            println!("{} runs written to {}", c.traces.len(), c.dir.display());
        }
        Command::Theory { config, out } => {
            let tag = |e| (Some(config.clone()), e);
            let cfg = load(&config, out).map_err(tag)?;
            let r = theory_report(&cfg).map_err(tag)?;
            print!("{}", std::fs::read_to_string(&r.text).unwrap_or_default());
        }
        Command::Plotdata { dir } => {
            let p = emit_plot_data(&dir).map_err(|e| (None, e))?;
            println!("{}", p.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err((config, e)) => {
            match config {
                Some(c) => eprintln!("error [{}] in {}: {e}", e.category(), c.display()),
                None => eprintln!("error [{}]: {e}", e.category()),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
