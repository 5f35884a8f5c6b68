use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ruth_cli::{run, Command, Options, TUPLE_DEGREE_VAR};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Check,
    Adjoint,
    Weil,
    Brst,
    Im,
    Kdiff,
    Cohomology,
    Transfer,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Check => Command::Check,
            Cmd::Adjoint => Command::Adjoint,
            Cmd::Weil => Command::Weil,
            Cmd::Brst => Command::Brst,
            Cmd::Im => Command::Im,
            Cmd::Kdiff => Command::Kdiff,
            Cmd::Cohomology => Command::Cohomology,
            Cmd::Transfer => Command::Transfer,
        }
    }
}

/// Exact checks for Lie algebroids, representations up to homotopy and the
/// Weil algebra. Exits 0 iff every check passes, 1 on a failed check and 2 on
/// bad input.
#[derive(Parser, Debug)]
#[command(name = "ruth", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    #[arg(long)]
    manifest: PathBuf,
    /// Symmetric degree cutoff for Weil cohomology.
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
    /// Compute Weil cohomology (point base only).
    #[arg(long)]
    cohomology: bool,
    #[arg(long, conflicts_with = "text")]
    json: bool,
    #[arg(long)]
    text: bool,
    /// Representation name from the manifest.
    #[arg(long)]
    rep: Option<String>,
    /// Degree for `kdiff`; overrides the manifest.
    #[arg(long)]
    k: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.manifest) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.manifest.display());
            return ExitCode::from(2);
        }
    };
    let mut opts = Options {
        max_degree: cli.max_degree,
        cohomology: cli.cohomology,
        rep: cli.rep,
        k: cli.k,
        ..Options::default()
    };
    if let Ok(v) = std::env::var(TUPLE_DEGREE_VAR) {
        match v.parse() {
            Ok(n) => opts.tuple_degree = n,
            Err(_) => {
                eprintln!("error: {TUPLE_DEGREE_VAR}={v} is not a number");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli.command.into(), &text, &opts) {
        Ok(report) => {
            if cli.text {
                print!("{}", report.to_text());
            } else {
                println!("{}", report.to_json());
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
