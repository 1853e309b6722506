use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use intertwine::json::{parse, render, CertificateJson, CodeJson, FieldJson, MatrixJson, PolyJson, ReportJson};
use intertwine::{
    bounds_rank, bounds_spectral, char_gcd, construct_code, construct_extremal, dim_via_formula, intertwiner_basis,
    is_zero_code_fast, min_distance, verify_certificate, CheckStatus, Error, Field, IntertwiningCode, Matrix,
    DEFAULT_BUDGET,
};

#[derive(Parser)]
#[command(name = "intertwine", version, about = "Intertwining codes over finite fields")]
struct Cli {
    /// Seed for randomized factorization.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest number of nonzero codewords to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Treat a skipped distance check as a failure.
    #[arg(long, global = true)]
    strict: bool,
    #[arg(long, global = true)]
    pretty: bool,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArg {
    /// Field order as `q` or `p^e`.
    #[arg(long, conflicts_with = "field", required_unless_present = "field")]
    q: Option<String>,
    /// Field fragment JSON file.
    #[arg(long)]
    field: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension by formula and by kernel oracle; several pairs give the oracle only.
    Dim { files: Vec<PathBuf> },
    /// Canonical basis of the code of one or more matrix pairs.
    Basis { files: Vec<PathBuf> },
    /// Exhaustive minimum distance of a code file or of matrix pairs.
    Mindist { files: Vec<PathBuf> },
    /// Spectral and rank dimension bounds with the true dimension.
    Bounds { a: PathBuf, b: PathBuf },
    /// Whether gcd(c_A, c_B) = 1, i.e. the code is zero.
    Zero { a: PathBuf, b: PathBuf },
    /// Build a code of dimension k and distance floor(r/k) s.
    Construct {
        r: usize,
        s: usize,
        k: usize,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Build a code of dimension min(r,s) and distance max(r,s).
    Extremal {
        r: usize,
        s: usize,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Re-check a certificate.
    Verify { cert: PathBuf },
    /// Factor a polynomial file into monic irreducibles.
    Factor { poly: PathBuf },
}

enum Failure {
    Usage(String),
    Math(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Math(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Math(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Math(e.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<Matrix, Failure> {
    Ok(parse::<MatrixJson>(&read(path)?)?.to_matrix()?)
}

fn load_pairs(files: &[PathBuf]) -> Result<(Vec<Matrix>, Vec<Matrix>), Failure> {
    if files.is_empty() || !files.len().is_multiple_of(2) {
        return Err(Failure::Usage("expected matrix files in pairs: A1 B1 [A2 B2 ...]".into()));
    }
    let mats = files.iter().map(|f| load_matrix(f)).collect::<Result<Vec<_>, _>>()?;
    let (a, b) = mats.chunks(2).map(|p| (p[0].clone(), p[1].clone())).unzip();
    Ok((a, b))
}

fn load_field(arg: &FieldArg) -> Result<Field, Failure> {
    match (&arg.q, &arg.field) {
        (Some(q), _) => intertwine::gf::parse_order(q).map_err(|e| Failure::Usage(e.to_string())),
        (None, Some(path)) => Ok(parse::<FieldJson>(&read(path)?)?.to_field()?),
        (None, None) => Err(Failure::Usage("one of --q or --field is required".into())),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("wire structs always serialize")
}

fn cmd_dim(files: &[PathBuf], seed: u64) -> Outcome {
    let (a, b) = load_pairs(files)?;
    let code = intertwiner_basis(&a, &b)?;
    if a.len() > 1 {
        return Ok(json!({
            "pairs": a.len(),
            "dim": code.k(),
            "note": "no closed formula for several pairs; oracle dimension only",
        }));
    }
    let formula = dim_via_formula(&a[0], &b[0], seed)?;
    if formula.total != code.k() {
        return Err(Failure::Math(format!(
            "internal error: formula gives {}, kernel oracle gives {}",
            formula.total,
            code.k()
        )));
    }
    let ledger: Vec<Value> = formula
        .ledger
        .iter()
        .map(|c| {
            json!({
                "irr": to_value(&PolyJson::from_poly(&c.irr)),
                "deg": c.deg,
                "lambda": c.lambda.parts(),
                "mu": c.mu.parts(),
                "contribution": c.contribution,
            })
        })
        .collect();
    Ok(json!({ "dim": code.k(), "formula": formula.total, "oracle": code.k(), "ledger": ledger }))
}

fn load_code(files: &[PathBuf]) -> Result<IntertwiningCode, Failure> {
    if files.len() == 1 {
        return Ok(parse::<CodeJson>(&read(&files[0])?)?.to_code()?);
    }
    let (a, b) = load_pairs(files)?;
    Ok(intertwiner_basis(&a, &b)?)
}

fn cmd_mindist(files: &[PathBuf], budget: u64) -> Outcome {
    let md = min_distance(&load_code(files)?, budget)?;
    Ok(json!({ "d": md.d, "enumerated": md.enumerated }))
}

fn cmd_bounds(a: &Path, b: &Path, seed: u64) -> Outcome {
    let (a, b) = (load_matrix(a)?, load_matrix(b)?);
    let spectral = bounds_spectral(&a, &b, seed)?;
    let rank = bounds_rank(&a, &b)?;
    let dim = intertwiner_basis(&[a], &[b])?.k();
    Ok(json!({
        "spectral": { "lo": spectral.lo, "hi": spectral.hi },
        "rank": { "lo": rank.lo, "hi": rank.hi },
        "dim": dim,
    }))
}

fn cmd_zero(a: &Path, b: &Path) -> Outcome {
    let (a, b) = (load_matrix(a)?, load_matrix(b)?);
    let zero = is_zero_code_fast(&a, &b)?;
    let gcd = char_gcd(&a, &b)?;
    Ok(json!({ "zero": zero, "gcd": to_value(&PolyJson::from_poly(&gcd)) }))
}

/// The report is emitted even when verification fails.
fn cmd_verify(path: &Path, budget: u64, strict: bool) -> Result<(Value, Option<Failure>), Failure> {
    let cert = parse::<CertificateJson>(&read(path)?)?.to_certificate()?;
    let report = verify_certificate(&cert, budget);
    let out = to_value(&ReportJson::from_report(&report));
    let failed: Vec<&str> = report.checks.iter().filter(|c| c.status == CheckStatus::Fail).map(|c| c.name).collect();
    let verdict = if !failed.is_empty() {
        Some(Failure::Math(format!("certificate rejected: failed {}", failed.join(", "))))
    } else if report.skipped() && strict {
        Some(Failure::Budget("distance check skipped under --strict".into()))
    } else {
        if report.skipped() {
            eprintln!("warning: distance check skipped; raise --budget to run it");
        }
        None
    };
    Ok((out, verdict))
}

fn cmd_factor(path: &Path, seed: u64) -> Outcome {
    let p = parse::<PolyJson>(&read(path)?)?.to_poly()?;
    let f = p.factor(seed)?;
    let factors: Vec<Value> =
        f.factors.iter().map(|(irr, m)| json!({ "irr": to_value(&PolyJson::from_poly(irr)), "mult": m })).collect();
    Ok(json!({ "unit": f.unit.0, "factors": factors }))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let out = |v: &Value| emit(&render(v, cli.pretty), cli.out.as_deref());
    let value = match &cli.command {
        Command::Dim { files } => cmd_dim(files, cli.seed)?,
        Command::Basis { files } => {
            let (a, b) = load_pairs(files)?;
            to_value(&CodeJson::from_code(&intertwiner_basis(&a, &b)?))
        }
        Command::Mindist { files } => cmd_mindist(files, cli.budget)?,
        Command::Bounds { a, b } => cmd_bounds(a, b, cli.seed)?,
        Command::Zero { a, b } => cmd_zero(a, b)?,
        Command::Construct { r, s, k, field } => {
            let cert = construct_code(*r, *s, *k, &load_field(field)?)?;
            to_value(&CertificateJson::from_certificate(&cert))
        }
        Command::Extremal { r, s, field } => {
            let cert = construct_extremal(*r, *s, &load_field(field)?)?;
            to_value(&CertificateJson::from_certificate(&cert))
        }
        Command::Verify { cert } => {
            let (report, verdict) = cmd_verify(cert, cli.budget, cli.strict)?;
            out(&report)?;
            return verdict.map_or(Ok(()), Err);
        }
        Command::Factor { poly } => cmd_factor(poly, cli.seed)?,
    };
    out(&value)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
