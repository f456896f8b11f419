use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gnss_an_auth::checks;
use gnss_an_auth::config::Config;
use gnss_an_auth::experiments::{run_experiment, EXPERIMENTS};

#[derive(Parser)]
#[command(name = "gnss-an-auth", version, about = "GNSS artificial-noise authentication experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment and write its CSV series and manifest.
    Run {
        /// One of the experiment names listed by `list`.
        experiment: String,
        /// Flat key = value configuration; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (created if missing).
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the `seed` key of the configuration.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the invariant suites; exits nonzero if any fails.
    Check,
    /// List experiment names.
    List,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            experiment,
            config,
            out,
            seed,
        } => {
            let mut cfg = match config {
                Some(path) => match Config::load(&path) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                },
                None => Config::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            match run_experiment(&experiment, &cfg, &out) {
                Ok(summary) => {
                    for f in &summary.files {
                        println!("wrote {}", f.display());
                    }
                    for (k, v) in &summary.results {
                        println!("{k} = {v}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Check => {
            let mut ok = true;
            for o in checks::run_all() {
                println!("{} {:<20} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                ok &= o.passed;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::List => {
            for e in EXPERIMENTS {
                println!("{e}");
            }
            ExitCode::SUCCESS
        }
    }
}
