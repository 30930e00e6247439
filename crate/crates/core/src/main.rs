use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mtorus::cayley::Budget;
use mtorus::cli::{run, Command, ExitStatus, Format, Options};
use mtorus::train_track::DEFAULT_HORIZON;

#[derive(Parser)]
#[command(name = "mtorus", version, about = "Analyse mapping tori of free-group automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Growth, certificate and divergence samples together
    Analyze(Args),
    /// Classify the growth of the automorphism
    Growth(Args),
    /// Verify the representative and certify the thickness order
    Certify(Args),
    /// Sample the divergence statistic chi(r)
    Divergence(Args),
}

#[derive(Parser)]
struct Args {
    file: PathBuf,
    /// iterations for growth sampling
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    max_n: u32,
    /// divergence radii, `R0..R1` inclusive or a single value
    #[arg(long, default_value = "2..4", value_parser = parse_range)]
    radius: (u32, u32),
    /// search horizon as a multiple of r
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    /// record that the certificate is for this power of the automorphism
    #[arg(long, default_value_t = 1)]
    power: u32,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Structured,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let r = parse(s)?;
            (r, r)
        }
    };
    if lo == 0 || lo > hi {
        return Err(format!("bad radius range {s}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Analyze(a) => (Command::Analyze, a),
        Sub::Growth(a) => (Command::Growth, a),
        Sub::Certify(a) => (Command::Certify, a),
        Sub::Divergence(a) => (Command::Divergence, a),
    };
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", args.file.display());
            return ExitCode::from(ExitStatus::Parse as u8);
        }
    };
    let opts = Options {
        max_n: args.max_n,
        radius: args.radius,
        horizon: args.horizon,
        power: args.power,
        budget: Budget::from_env(),
    };
    let report = match run(command, &text, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", args.file.display());
            return ExitCode::from(ExitStatus::Parse as u8);
        }
    };
    let format = match args.format {
        OutFormat::Text => Format::Text,
        OutFormat::Structured => Format::Structured,
    };
    print!("{}", report.render(format));
    if let Some(f) = &report.failure {
        eprintln!("{}: {}", f.code, f.message);
    }
    ExitCode::from(report.exit_status() as u8)
}
