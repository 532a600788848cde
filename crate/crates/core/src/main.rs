use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use arlab::cli::{run, Command, RunConfig, DEFAULT_SEED, EXIT_INPUT};
use arlab::groebner::Budget;
use arlab::poly::MonomialOrder;
use arlab::residue::CutoffProfile;

/// Artin–Rees exponents, diamond products of complexes, pointwise homotopies and residue currents.
///
/// Budgets can be overridden with ARLAB_MAX_DEGREE, ARLAB_MAX_BASIS and ARLAB_MAX_PAIRS.
/// Exit codes: 0 ok, 1 check failed, 2 budget exhausted, 3 input error.
#[derive(Parser)]
#[command(name = "arlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Reduced Gröbner bases of the ideals and the module of an instance file.
    Groebner(Flags),
    /// Koszul complexes of the ideals of an instance file.
    Koszul(Flags),
    /// Diamond product of the complexes in a file (or of the Koszul complexes of the ideals).
    Diamond(Flags),
    /// Checks the containment for the `mu` given in the instance file.
    ArCheck(Flags),
    /// Smallest mu for every ideal of a family sharing the module.
    ArSweep(Flags),
    /// Pointwise homotopy identities at seeded random points.
    PointCheck(Flags),
    /// Residue and principal value actions and their products.
    ResidueDemo(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    r_max: Option<u32>,
    #[arg(long)]
    mu_cap: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    /// Cutoff profile: smoothstep or exp-splice.
    #[arg(long, value_parser = parse_profile)]
    profile: Option<CutoffProfile>,
    /// Monomial order, for example grevlex, lex/pot or graded-lex/top.
    #[arg(long, value_parser = MonomialOrder::parse)]
    order: Option<MonomialOrder>,
    #[arg(short, long)]
    verbose: bool,
}

fn parse_profile(s: &str) -> Result<CutoffProfile, String> {
    CutoffProfile::parse(s).ok_or_else(|| format!("unknown profile `{s}`"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, f) = match cli.command {
        Sub::Groebner(f) => (Command::Groebner, f),
        Sub::Koszul(f) => (Command::Koszul, f),
        Sub::Diamond(f) => (Command::Diamond, f),
        Sub::ArCheck(f) => (Command::ArCheck, f),
        Sub::ArSweep(f) => (Command::ArSweep, f),
        Sub::PointCheck(f) => (Command::PointCheck, f),
        Sub::ResidueDemo(f) => (Command::ResidueDemo, f),
    };
    let config = RunConfig {
        command,
        input: f.input,
        output: f.output,
        seed: f.seed,
        r_max: f.r_max,
        mu_cap: f.mu_cap,
        tol: f.tol,
        profile: f.profile,
        order: f.order,
        budget: Budget::from_env(),
        verbose: f.verbose,
    };
    let outcome = run(&config);
    match &config.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.report) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => print!("{}", outcome.report),
    }
    ExitCode::from(outcome.exit_code as u8)
}
