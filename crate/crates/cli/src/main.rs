use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use tfr_cli::commands::parse_degree;
use tfr_cli::{fixtures, parse_input, run_command, CharSel, CommandKind, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
}

/// Toric face rings: monoidal complexes, local cohomology and F-purity.
#[derive(Parser, Debug)]
#[command(name = "tfr", version)]
struct Args {
    /// validate, normalize, seminormalize, check, presentation, cohomology,
    /// depth, fpure, oracle or frobenius
    command: String,
    /// Input document: a path, `-` for standard input, or a built-in fixture
    /// name (FIX-A, FIX-B, FIX-C, STANLEY-LINE, STANLEY-OCTANT)
    input: String,
    /// Degree `a` as comma-separated integers, e.g. `0,-1`
    #[arg(long, allow_hyphen_values = true)]
    degree: Option<String>,
    /// Cohomology of every star class (seminormal complexes)
    #[arg(long)]
    report: bool,
    /// Characteristic: 0, a prime, or `all`
    #[arg(long = "char", default_value = "0")]
    chars: CharSel,
    /// Radius of the degree box scanned against the oracle
    #[arg(long = "box")]
    box_radius: Option<u64>,
    /// Seminormalization, presentation or oracle search bound
    #[arg(long)]
    bound: Option<u64>,
    /// Prime for the Frobenius check
    #[arg(short = 'p')]
    prime: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn read_input(arg: &str) -> std::io::Result<String> {
    if let Some(t) = fixtures::builtin(arg) {
        return Ok(t.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(arg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let Format::Json = args.format;
    let fail = |msg: String| {
        eprintln!("tfr: {msg}");
        ExitCode::from(1)
    };
    let Some(command) = CommandKind::parse(&args.command) else {
        return fail(format!("unknown command {}", args.command));
    };
    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", args.input)),
    };
    let doc = match parse_input(&text) {
        Ok(d) => d,
        Err(e) => return fail(format!("{}: {e}", args.input)),
    };
    let degree = match args.degree.as_deref().map(|s| parse_degree(s, doc.dimension)).transpose() {
        Ok(d) => d,
        Err(e) => return fail(e.to_string()),
    };
    let opts = RunOptions {
        degree,
        report: args.report,
        chars: args.chars,
        box_radius: args.box_radius,
        bound: args.bound,
        prime: args.prime,
    };
    match run_command(&doc, &text, command, &opts) {
        Ok(report) => {
            print!("{}", report.render());
            for w in report.json["warnings"].as_array().into_iter().flatten() {
                eprintln!("tfr: warning: {}", w.as_str().unwrap_or_default());
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => fail(e.to_string()),
    }
}
