use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qrf::sweep::{self, ExperimentConfig, RawConfig};
use qrf::Error;

#[derive(Parser)]
#[command(name = "qrf", about = "Ramsey interferometry with quantum reference frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment over a phase grid and emit CSV.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        experiment: Option<String>,
        #[arg(long = "nbar")]
        nbar: Option<String>,
        #[arg(long = "K")]
        k: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
        /// Output CSV path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        grid: GridFlags,
    },
    /// Max |p_A difference| between two configurations on a shared grid.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        grid: GridFlags,
    },
}

#[derive(Args)]
struct GridFlags {
    #[arg(long = "phi-min", allow_negative_numbers = true)]
    phi_min: Option<String>,
    #[arg(long = "phi-max", allow_negative_numbers = true)]
    phi_max: Option<String>,
    #[arg(long = "phi-steps")]
    phi_steps: Option<String>,
}

impl GridFlags {
    fn insert(&self, map: &mut RawConfig) {
        for (key, value) in [("phi_min", &self.phi_min), ("phi_max", &self.phi_max), ("phi_steps", &self.phi_steps)] {
            if let Some(v) = value {
                map.insert(key.to_string(), v.clone());
            }
        }
    }
}

fn load(path: Option<&PathBuf>) -> Result<RawConfig, Error> {
    path.map_or_else(|| Ok(RawConfig::new()), |p| sweep::read_config_file(p))
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { config, experiment, nbar, k, epsilon, out, grid } => {
            let mut flags = RawConfig::new();
            for (key, value) in [("experiment", experiment), ("nbar", nbar), ("K", k), ("epsilon", epsilon)] {
                if let Some(v) = value {
                    flags.insert(key.to_string(), v);
                }
            }
            if let Some(out) = out {
                flags.insert("out".into(), out.display().to_string());
            }
            grid.insert(&mut flags);
            let merged = sweep::merge_config(&load(config.as_ref())?, &flags);
            let config = ExperimentConfig::from_raw(&merged)?;
            let result = sweep::run_to_file(&config)?;
            if config.output_path.is_none() {
                print!("{}", result.to_csv());
            }
        }
        Command::Compare { a, b, grid } => {
            let mut flags = RawConfig::new();
            grid.insert(&mut flags);
            let a = ExperimentConfig::from_raw(&sweep::merge_config(&load(Some(&a))?, &flags))?;
            let b = ExperimentConfig::from_raw(&sweep::merge_config(&load(Some(&b))?, &flags))?;
            println!("{}", sweep::compare(&a, &b)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qrf: {e}");
            match e {
                Error::Config(_) | Error::InvalidParameter(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
