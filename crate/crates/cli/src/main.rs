use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use milnor_core::numbers::parse_rational;
use milnor_core::{Rational, RotationNumber};
use newton_milnor::{parse_json, parse_polynomial, run, CliError, Command, Job, Selector};

#[derive(Parser)]
#[command(name = "newton-milnor", version, about = "Milnor fiber invariants from the Newton polyhedron")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compact faces with lattice distances
    Faces(Opts),
    /// Monodromy zeta function
    Zeta(Opts),
    /// Bad eigenvalues R_f as rotation numbers
    Rf(Opts),
    /// Equivariant E-polynomials
    Epoly(Opts),
    /// Jordan block counts for good eigenvalues
    Jordan(Opts),
    /// Spectrum parts Sp^λ for good eigenvalues
    Spectrum(Opts),
    /// The full Hodge spectrum
    FullSpectrum(Opts),
    /// Everything for the good eigenvalues
    Report(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct Opts {
    /// Polynomial such as 'x1^7 + x1^3*x2 + x1^2*x2^4'
    #[arg(short, long, conflicts_with = "json", required_unless_present = "json")]
    expr: Option<String>,
    /// JSON file {"n": n, "monomials": [[...], ...]}
    #[arg(long, value_name = "FILE")]
    json: Option<std::path::PathBuf>,
    /// Eigenvalue exp(2πiθ) given as θ = a/b in [0, 1); repeatable
    #[arg(long, value_name = "a/b", conflicts_with = "all_good")]
    theta: Vec<String>,
    /// Use every eigenvalue outside R_f
    #[arg(long)]
    all_good: bool,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Worker threads for the per-eigenvalue computations
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn theta(s: &str) -> Result<RotationNumber, CliError> {
    let r = parse_rational(s).map_err(|_| CliError::user("bad-theta", format!("{s:?} is not a rational a/b")))?;
    if r < Rational::from(0) || r >= Rational::from(1) {
        return Err(CliError::user("bad-theta", format!("θ = {s} is outside [0, 1)")));
    }
    Ok(RotationNumber::new(r))
}

fn job(command: Command, o: &Opts) -> Result<Job, CliError> {
    let support = match (&o.expr, &o.json) {
        (Some(e), _) => parse_polynomial(e)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::user("io", format!("{}: {e}", path.display())))?;
            parse_json(&text)?
        }
        (None, None) => return Err(CliError::user("no-input", "give -e EXPR or --json FILE")),
    };
    let selector = if o.all_good {
        Selector::AllGood
    } else if o.theta.is_empty() {
        Selector::Unspecified
    } else {
        Selector::Thetas(o.theta.iter().map(|t| theta(t)).collect::<Result<_, _>>()?)
    };
    if o.threads == 0 {
        return Err(CliError::user("bad-threads", "--threads must be at least 1"));
    }
    Ok(Job { support, command, selector })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (command, opts) = match &cli.command {
        Cmd::Faces(o) => (Command::Faces, o),
        Cmd::Zeta(o) => (Command::Zeta, o),
        Cmd::Rf(o) => (Command::Rf, o),
        Cmd::Epoly(o) => (Command::Epoly, o),
        Cmd::Jordan(o) => (Command::Jordan, o),
        Cmd::Spectrum(o) => (Command::Spectrum, o),
        Cmd::FullSpectrum(o) => (Command::FullSpectrum, o),
        Cmd::Report(o) => (Command::Report, o),
    };
    let result = job(command, opts).and_then(|j| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| CliError { code: "internal".into(), detail: e.to_string(), internal: true })?;
        pool.install(|| run(&j))
    });
    match (result, opts.format) {
        (Ok(r), Format::Json) => {
            println!("{}", serde_json::to_string_pretty(&r.to_json()).expect("serializable"));
            ExitCode::SUCCESS
        }
        (Ok(r), Format::Human) => {
            print!("{}", r.to_human());
            ExitCode::SUCCESS
        }
        (Err(e), Format::Json) => {
            println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("serializable"));
            ExitCode::from(e.exit_code() as u8)
        }
        (Err(e), Format::Human) => {
            eprintln!("error [{}]: {}", e.code, e.detail);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
