use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rotorb_cli::{run, ExperimentConfig, ExperimentKind};

#[derive(Parser)]
#[command(name = "rotorb", version, about = "Orbits of stationary and peripatetic rotation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Breadth-first orbit of a point under the generators
    Orbit(RunArgs),
    /// Orbit plus mesh and grid coverage over a probe ball
    Density(RunArgs),
    /// Alternating-generator ladder of nested stationary clouds
    Ladder(RunArgs),
    /// Gap statistics of an iterated circle rotation
    Gaps(RunArgs),
    /// Roll the regular tetrahedron over a sequence of edges
    Tumble(RunArgs),
    /// In-plane slice of the tetrahedral edge-rotation orbit
    Hexagon(RunArgs),
    /// Whether two lines conform rationally
    Conform(RunArgs),
    /// Rational/irrational verdict for an angle tag
    Classify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long, default_value = "out", value_parser = clap::value_parser!(OsString))]
    out: OsString,
    /// Overrides the config's seed
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Orbit(a) => (ExperimentKind::Orbit, a),
        Command::Density(a) => (ExperimentKind::Density, a),
        Command::Ladder(a) => (ExperimentKind::Ladder, a),
        Command::Gaps(a) => (ExperimentKind::Gaps, a),
        Command::Tumble(a) => (ExperimentKind::Tumble, a),
        Command::Hexagon(a) => (ExperimentKind::Hexagon, a),
        Command::Conform(a) => (ExperimentKind::Conform, a),
        Command::Classify(a) => (ExperimentKind::Classify, a),
    };
    let result = ExperimentConfig::load(&args.config).and_then(|mut config| {
        if let Some(seed) = args.seed {
            config.seed = seed;
        }
        run(kind, &config, Path::new(&args.out))
    });
    match result {
        Ok(report) => {
            eprintln!(
                "{kind}: wrote {} to {} in {:.3}s",
                report.artifacts.join(", "),
                Path::new(&args.out).display(),
                report.wall_clock.as_secs_f64()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
