use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pformed::checks::{run, Command};
use pformed::scenario::Scenario;

/// Verification engine for p-form electrodynamics-like theories: energy and
/// force functionals over polynomial fields, checked by independent routes.
#[derive(Parser)]
#[command(name = "pformed", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CommandArg,
}

#[derive(Subcommand)]
enum CommandArg {
    /// Seeded property suites: exterior algebra, the R^3 dictionary, flows, Stokes
    Identities(RunArgs),
    /// Energy route agreement for the scenario
    Energy(RunArgs),
    /// Force route triangle for the scenario
    Force(RunArgs),
    /// Electrostatic reduction checks (requires n = 3, p = 0)
    #[command(name = "reduce-p0")]
    ReduceP0(RunArgs),
    /// Magnetostatic reduction checks (requires n = 3, p = 1)
    #[command(name = "reduce-p1")]
    ReduceP1(RunArgs),
    /// Every check applicable to the scenario
    All(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON file
    #[arg(long)]
    scenario: PathBuf,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the per-axis quadrature order
    #[arg(long = "quad-order")]
    quad_order: Option<usize>,
    /// Override the finite-difference step
    #[arg(long = "h")]
    h: Option<f64>,
    /// Write the JSON report to this path
    #[arg(long = "json-out")]
    json_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        CommandArg::Identities(a) => (Command::Identities, a),
        CommandArg::Energy(a) => (Command::Energy, a),
        CommandArg::Force(a) => (Command::Force, a),
        CommandArg::ReduceP0(a) => (Command::ReduceP0, a),
        CommandArg::ReduceP1(a) => (Command::ReduceP1, a),
        CommandArg::All(a) => (Command::All, a),
    };

    let mut scenario = match Scenario::load(&args.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    if let Some(order) = args.quad_order {
        if let Err(e) = pformed::quadrature::QuadratureRule::new(order) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        scenario.quad_order = order;
    }
    if let Some(h) = args.h {
        if !h.is_finite() || h <= 0.0 {
            eprintln!("error: --h must be positive, got {h}");
            return ExitCode::from(2);
        }
        scenario.fd_step = h;
    }

    for w in &scenario.warnings {
        eprintln!("warning: {w}");
    }

    let report = run(command, &scenario);
    print!("{}", report.render_text());

    if let Some(path) = &args.json_out {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(2);
        }
    }

    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
