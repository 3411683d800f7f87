use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwc::experiments::{self, ExperimentConfig, ExperimentKind};
use qwc::verify::{run_all, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "qwc",
    version,
    about = "Variational circuit compilation with a k-local Wasserstein cost"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train ansatz copies against random HEA targets
    Compile(RunArgs),
    /// Success rate against Pauli locality k
    SweepK(RunArgs),
    /// Success rate against probe-ensemble size
    SweepStates(RunArgs),
    /// Step-one gradient norms against qubit count
    BarrenPlateau(RunArgs),
    /// Run the built-in property checks
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON manifest; defaults apply to anything it leaves out
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

fn run_experiment(kind: ExperimentKind, args: RunArgs) -> qwc::Result<()> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => ExperimentConfig::new(kind),
    };
    if cfg.experiment != kind {
        return Err(qwc::QwcError::Config(format!(
            "manifest is for `{}` but the subcommand is `{}`",
            cfg.experiment.name(),
            kind.name()
        )));
    }
    if args.seed.is_some() {
        cfg.seed = args.seed;
    }
    if args.out.is_some() {
        cfg.output = args.out;
    }
    let resolved = cfg.resolve()?;
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(qwc::QwcError::Config("--jobs must be >= 1".into()));
    }
    for path in experiments::run(&resolved, jobs)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compile(a) => run_experiment(ExperimentKind::Compile, a),
        Command::SweepK(a) => run_experiment(ExperimentKind::SweepK, a),
        Command::SweepStates(a) => run_experiment(ExperimentKind::SweepStates, a),
        Command::BarrenPlateau(a) => run_experiment(ExperimentKind::BarrenPlateau, a),
        Command::Verify { seed } => match run_all(&VerifyOptions {
            seed,
            ..Default::default()
        }) {
            Ok(checks) => {
                checks.iter().for_each(|c| println!("{c}"));
                if checks.iter().all(|c| c.passed) {
                    return ExitCode::SUCCESS;
                }
                return ExitCode::FAILURE;
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
