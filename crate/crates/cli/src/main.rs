use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fqcodes_cli::{build, distance, export, load_config, parse_config, sample, verify, CliError, RunConfig};

#[derive(Parser)]
#[command(version, about = "Build, verify and decode concatenated fermion-to-qubit codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Config file (key = value lines or JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Comma-separated physical error rates.
    #[arg(long, global = true, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Assemble the code and write a bundle.
    Build,
    /// Run every structural check; nonzero exit on failure.
    Verify,
    /// Distance bounds.
    Distance,
    /// Monte Carlo decoding; writes CSV and fit summary.
    Sample,
    /// Write stabilizer and logical check matrices.
    Export,
}

fn config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => parse_config("d_Ff = 3")?,
    };
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.trials {
        if t == 0 {
            return Err(CliError::Config(vec!["trials: must be at least 1".into()]));
        }
        cfg.trials = t;
    }
    if let Some(p) = &cli.p {
        if let Some(x) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(CliError::Config(vec![format!("p: {x} is outside [0, 1]")]));
        }
        cfg.p = p.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        // Fails only if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cfg = config(cli)?;
    match cli.command {
        Command::Build => build(&cfg).map(drop),
        Command::Verify => verify(&cfg).map(drop),
        Command::Distance => distance(&cfg).map(drop),
        Command::Sample => sample(&cfg).map(drop),
        Command::Export => export(&cfg).map(drop),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
