use std::process::ExitCode;

use abel_air_cli::{input, input_error, parse_point, run, Mode, Outcome, PathSpec, RunOptions};
use clap::{Args, Parser, Subcommand};

/// Classify an Abel inverse-Riccati equation, build its closed-form implicit
/// solution and check it against a numerical integration.
#[derive(Parser, Debug)]
#[command(name = "abel-air", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stop after classification.
    Classify(OutputArgs),
    /// Classify, solve and verify (default).
    Solve(SolveArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Equation text (e.g. "y' = 1/(y + x^2)"), a file holding one, a JSON
    /// document, or - for standard input.
    input: Option<String>,
    /// Single-line JSON report (default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Human-readable summary instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    out: OutputArgs,
    /// Drift threshold for a passing verdict.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Start of the verification path: x0,y0 or x0,re(y0),im(y0).
    #[arg(long, value_name = "X0,Y0", allow_hyphen_values = true)]
    from: Option<String>,
    /// End of the verification path (requires --from).
    #[arg(long, value_name = "X1", requires = "from", allow_hyphen_values = true)]
    to: Option<f64>,
    /// Seed for jittering the automatic initial-point search.
    #[arg(long)]
    seed: Option<u64>,
}

fn emit(outcome: &Outcome, pretty: bool) -> ExitCode {
    if pretty {
        print!("{}", outcome.report.to_text());
    } else {
        println!("{}", outcome.report.to_json());
    }
    ExitCode::from(outcome.status.exit_code() as u8)
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (mode, args) = match cli.command {
        Some(Command::Classify(out)) => {
            (Mode::Classify, SolveArgs { out, tol: 1e-6, from: None, to: None, seed: None })
        }
        Some(Command::Solve(a)) => (Mode::Solve, a),
        None => (Mode::Solve, cli.solve),
    };
    let Some(text) = args.out.input.as_deref() else {
        return usage("missing INPUT (an equation, a file, or -)");
    };
    if args.tol.is_nan() || args.tol <= 0.0 {
        return usage("--tol must be positive");
    }
    let path = match args.from.as_deref().map(parse_point).transpose() {
        Ok(p) => p.map(|(x0, y0)| PathSpec { x0, y0, x1: args.to }),
        Err(msg) => return usage(&format!("--from: {msg}")),
    };
    let opts = RunOptions { mode, tol: args.tol, path, seed: args.seed };
    let outcome = match input::load(text) {
        Ok(eq) => run(&eq, &opts),
        Err(e) => input_error(&e),
    };
    emit(&outcome, args.out.pretty)
}
