use std::path::PathBuf;
use std::process::ExitCode;

use anisogreen_cli::config::Task;
use anisogreen_cli::run::{self, Check};
use anisogreen_cli::{parse_config, CliError};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "anisogreen", version, about = "Frequency-domain Green's tensors for viscoelastic anisotropic media")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Green's tensor on a grid, one volume per frequency.
    EvalGrid {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (capped by ANISOGREEN_THREADS).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Synthesize time-domain traces at one receiver.
    Seismogram {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a numerical self-check.
    Validate {
        /// residual | eigen | quadrature | kernel-ft
        kind: Check,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Media catalog.
    Media {
        #[command(subcommand)]
        action: MediaAction,
    },
}

#[derive(Subcommand)]
enum MediaAction {
    List,
}

fn output_dir(flag: Option<PathBuf>, config: &anisogreen_cli::RunConfig) -> PathBuf {
    flag.or_else(|| config.output.directory.clone()).unwrap_or_else(|| PathBuf::from("."))
}

fn validate(kind: Check, config: PathBuf, out: Option<PathBuf>) -> Result<(), CliError> {
    let config = parse_config(&config)?;
    let report = run::run_check(kind, &config)?;
    println!("{}", report.summary);
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let name = format!("validate_{}.csv", format!("{kind:?}").to_ascii_lowercase());
        let path = dir.join(name);
        std::fs::write(&path, report.csv).map_err(|e| CliError::io(&path, e))?;
    }
    if report.passed {
        println!("PASS");
        Ok(())
    } else {
        Err(CliError::Validation(report.summary))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::EvalGrid { config, out, threads } => {
            let config = parse_config(&config)?;
            if config.task != Task::EvalGrid {
                eprintln!("note: run.task is {:?}, running eval-grid as requested", config.task);
            }
            let threads = threads.map_or_else(run::worker_count, |t| t.min(run::worker_count()).max(1));
            for path in run::eval_grid(&config, &output_dir(out, &config), threads)? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Seismogram { config, out } => {
            let config = parse_config(&config)?;
            for path in run::seismogram(&config, &output_dir(out, &config))? {
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Validate { kind, config, out } => validate(kind, config, out),
        Command::Media { action: MediaAction::List } => {
            print!("{}", run::media_list());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
