use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cuspcalc::chain::{self, Inductance, LinearChain};
use cuspcalc::verifier::{self, AnalysisError, CurveSpec, Report};
use cuspcalc::{selfcheck, CuspSpec, Verdict};

mod render;

use render::Style;

#[derive(Parser)]
#[command(name = "cuspcalc", version, about = "Exact invariants of rational cuspidal plane curves")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Print every verdict and the full negative part.
    #[arg(short, long, global = true)]
    verbose: bool,

    /// Colour text output.
    #[arg(long, value_enum, env = "CUSPCALC_COLOR", default_value_t = ColorMode::Auto, global = true)]
    color: ColorMode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColorMode {
    Auto,
    Never,
}

#[derive(Subcommand)]
enum Command {
    /// Linear chain arithmetic.
    Chain {
        #[command(subcommand)]
        op: ChainOp,
    },
    /// Analyze one curve given inline or as a JSON file.
    Analyze {
        #[arg(long, conflicts_with = "input")]
        degree: Option<u32>,
        /// Multiplicity sequence of one cusp, e.g. `2,2,2`. Repeat per cusp.
        #[arg(long = "cusp", value_parser = parse_cusp, conflicts_with = "input")]
        cusps: Vec<CuspSpec>,
        /// JSON file holding `{"degree": .., "cusps": [[..], ..]}`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// List the built-in curves.
    Catalog,
    /// Analyze every catalog curve and run the property sweeps.
    Verify {
        /// JSON array of curves to use instead of the built-in catalog.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ChainOp {
    /// Discriminant d(A).
    Disc { chain: LinearChain },
    /// Inductance e(A).
    Ind { chain: LinearChain },
    /// The admissible chain with inductance P/Q.
    Inv { value: Inductance },
    /// Adjoint chain A*.
    Adjoint { chain: LinearChain },
    /// A * B: fuse the last entry of A with the first of B.
    Star { a: LinearChain, b: LinearChain },
}

fn parse_cusp(s: &str) -> Result<CuspSpec, String> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let mults = inner
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("bad multiplicity {t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    CuspSpec::new(mults).map_err(|e| e.to_string())
}

/// A failure that maps to a specific exit code.
enum Failure {
    /// Bad input or I/O: exit 1.
    Input(String),
    /// Some verdict failed: exit 2 for `analyze`, 1 for `verify`.
    Verdict(u8),
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let style = Style::detect(cli.color == ColorMode::Auto);
    let result = match &cli.command {
        Command::Chain { op } => run_chain(op, cli.format),
        Command::Analyze { degree, cusps, input } => {
            run_analyze(*degree, cusps, input.as_deref(), cli.format, cli.verbose, style)
        }
        Command::Catalog => run_catalog(cli.format),
        Command::Verify { input } => run_verify(input.as_deref(), cli.format, cli.verbose, style),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verdict(code)) => ExitCode::from(code),
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report types serialize"));
}

fn run_chain(op: &ChainOp, format: Format) -> Result<(), Failure> {
    let input_err = |e: chain::ChainError| Failure::Input(e.to_string());
    let (name, input, result) = match op {
        ChainOp::Disc { chain } => ("disc", chain.to_string(), chain::discriminant(chain).to_string()),
        ChainOp::Ind { chain } => ("ind", chain.to_string(), chain::inductance(chain).map_err(input_err)?.to_string()),
        ChainOp::Inv { value } => {
            ("inv", value.to_string(), chain::inverse_inductance(value).map_err(input_err)?.to_string())
        }
        ChainOp::Adjoint { chain } => {
            ("adjoint", chain.to_string(), chain::adjoint(chain).map_err(input_err)?.to_string())
        }
        ChainOp::Star { a, b } => ("star", format!("{a} {b}"), chain::star(a, b).map_err(input_err)?.to_string()),
    };
    match format {
        Format::Text => println!("{result}"),
        Format::Json => print_json(&serde_json::json!({ "op": name, "input": input, "result": result })),
    }
    Ok(())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run_analyze(
    degree: Option<u32>,
    cusps: &[CuspSpec],
    input: Option<&Path>,
    format: Format,
    verbose: bool,
    style: Style,
) -> Result<(), Failure> {
    let spec = match (input, degree) {
        (Some(path), _) => serde_json::from_str::<CurveSpec>(&read_file(path)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        (None, Some(d)) => CurveSpec::new(None, d, cusps.to_vec()),
        (None, None) => return Err(Failure::Input("give --degree with --cusp, or --input FILE".into())),
    };
    let report = verifier::analyze(&spec)?;
    match format {
        Format::Text => print!("{}", render::report(&spec, &report, verbose, style)),
        Format::Json => print_json(&report),
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Verdict(2))
    }
}

fn run_catalog(format: Format) -> Result<(), Failure> {
    let cat = verifier::catalog();
    match format {
        Format::Text => {
            for spec in &cat {
                println!("{spec}");
            }
        }
        Format::Json => print_json(&cat),
    }
    Ok(())
}

#[derive(Serialize)]
struct CurveOutcome {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct VerifySummary {
    all_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_failure: Option<String>,
    curves: Vec<CurveOutcome>,
    properties: Vec<Verdict>,
}

fn run_verify(input: Option<&Path>, format: Format, verbose: bool, style: Style) -> Result<(), Failure> {
    let specs = match input {
        Some(path) => serde_json::from_str::<Vec<CurveSpec>>(&read_file(path)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        None => verifier::catalog(),
    };
    let results = verifier::verify_catalog(&specs);
    let properties = selfcheck::property_suite();

    let curves: Vec<CurveOutcome> = specs
        .iter()
        .zip(results)
        .enumerate()
        .map(|(i, (spec, res))| {
            let name = spec.name.clone().unwrap_or_else(|| format!("curve_{}", i + 1));
            match res {
                Ok(r) => CurveOutcome { name, report: Some(r), error: None },
                Err(e) => CurveOutcome { name, report: None, error: Some(e.to_string()) },
            }
        })
        .collect();
    let first_failure = curves
        .iter()
        .find_map(|c| match (&c.report, &c.error) {
            (_, Some(e)) => Some(format!("{}: {e}", c.name)),
            (Some(r), None) => r.failures().next().map(|v| format!("{}: {}", c.name, v.name)),
            (None, None) => None,
        })
        .or_else(|| properties.iter().find(|v| v.is_fail()).map(|v| format!("property sweep: {}", v.name)));
    let summary = VerifySummary { all_pass: first_failure.is_none(), first_failure, curves, properties };

    match format {
        Format::Text => print!("{}", render::verify_table(&summary_rows(&summary), &summary.properties, verbose, style)),
        Format::Json => print_json(&summary),
    }
    match &summary.first_failure {
        None => Ok(()),
        Some(what) => {
            eprintln!("verification failed: {what}");
            Err(Failure::Verdict(1))
        }
    }
}

fn summary_rows(s: &VerifySummary) -> Vec<render::Row<'_>> {
    s.curves
        .iter()
        .map(|c| render::Row { name: &c.name, report: c.report.as_ref(), error: c.error.as_deref() })
        .collect()
}
