//! `padtors`: JSON front end for the padtors library.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 torsion
//! certification mismatch, 3 precision exhaustion. Every failure prints a
//! `{"error": {"kind", "message"}}` object on stdout.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use padtors::elliptic::{torsion_scan, CurvePoint, FormalLog, WeierstrassCurve};
use padtors::family::{separation_check, FamilyModel};
use padtors::padic::check_prime;
use padtors::series::PadicSeries;
use padtors::tate::TateModel;
use padtors::{Error, Padic};

#[derive(Parser, Debug)]
#[command(name = "padtors", version, about = "p-adic torsion parameters on degenerating elliptic families")]
struct Cli {
    /// The prime (p >= 5).
    #[arg(long, global = true, default_value_t = 5)]
    p: u64,
    /// Working precision in p-adic digits.
    #[arg(long, global = true, env = "PADTORS_PREC", default_value_t = 60)]
    prec: i64,
    /// Number of power-series terms.
    #[arg(long = "series-order", global = true, default_value_t = 64)]
    series_order: i64,
    /// Include Newton transcripts.
    #[arg(long, global = true)]
    trace: bool,
    /// Write the JSON here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Torsion parameters t_n of the degenerating family.
    Counterexample {
        #[arg(long = "n-min", default_value_t = 4)]
        n_min: u32,
        #[arg(long = "n-max", default_value_t = 12)]
        n_max: u32,
    },
    /// Leading coefficients of the Tate-curve series.
    Tate {
        #[arg(long, default_value_t = 8)]
        terms: i64,
    },
    /// Torsion abscissae of a curve in a disk.
    TorsionScan(ScanArgs),
    /// Separation between torsion points of different orders.
    Separation(ScanArgs),
    /// Elliptic logarithm of a point in the kernel of reduction.
    EllLog {
        #[command(flatten)]
        curve: CurveArgs,
        /// Abscissa as `num/den`; omit together with --y for the point at infinity.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long, allow_hyphen_values = true)]
    a4: String,
    #[arg(long, allow_hyphen_values = true)]
    a6: String,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long = "max-order", default_value_t = 4)]
    max_order: u64,
    #[arg(long = "disk-val", default_value_t = 0, allow_hyphen_values = true)]
    disk_val: i64,
    /// Isolation depth in digits below the disk radius.
    #[arg(long, default_value_t = 3)]
    depth: i64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Certification(_) => 2,
        Error::PrecisionExhausted(_) | Error::NewtonStalled { .. } => 3,
        _ => 1,
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({"error": {"kind": kind, "message": message}}).to_string()
}

fn validate(cli: &Cli) -> Result<(), Error> {
    check_prime(cli.p)?;
    if cli.prec < 1 || cli.prec > 2000 {
        return Err(Error::InvalidPrecision(cli.prec));
    }
    if cli.series_order < 2 || cli.series_order > 1000 {
        return Err(Error::Domain(format!("series order {} must lie in 2..=1000", cli.series_order)));
    }
    match &cli.command {
        Command::Counterexample { n_min, n_max } => {
            if *n_min < 4 || n_min > n_max {
                return Err(Error::Domain(format!("need 4 <= n-min <= n-max, got {n_min} and {n_max}")));
            }
            if *n_max > 16 {
                return Err(Error::Domain(format!("n-max {n_max} exceeds 16")));
            }
            if cli.prec < *n_max as i64 + 20 {
                return Err(Error::Domain(format!("precision {} is below n-max + 20", cli.prec)));
            }
        }
        Command::Tate { terms } => {
            if *terms < 1 || *terms > cli.series_order {
                return Err(Error::Domain(format!("terms must lie in 1..=series-order, got {terms}")));
            }
        }
        Command::TorsionScan(a) | Command::Separation(a) => {
            if a.depth < 1 || a.depth > 12 {
                return Err(Error::Domain(format!("depth {} must lie in 1..=12", a.depth)));
            }
            if a.max_order > 12 {
                return Err(Error::Domain(format!("max-order {} exceeds 12", a.max_order)));
            }
        }
        Command::EllLog { x, y, .. } => {
            if x.is_some() != y.is_some() {
                return Err(Error::Domain("--x and --y go together".into()));
            }
        }
    }
    Ok(())
}

fn curve(cli: &Cli, c: &CurveArgs) -> Result<WeierstrassCurve, Error> {
    let a4 = Padic::parse_rational(&c.a4, cli.p, cli.prec)?;
    let a6 = Padic::parse_rational(&c.a6, cli.p, cli.prec)?;
    WeierstrassCurve::new(a4, a6)
}

fn coeffs(s: &PadicSeries, k: i64) -> Vec<Padic> {
    (0..k).map(|i| s.coeff(s.offset() + i)).collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn run(cli: &Cli) -> Result<Value, Error> {
    match &cli.command {
        Command::Counterexample { n_min, n_max } => {
            let model = FamilyModel::build(cli.p, cli.prec, cli.series_order)?;
            let report = model.accumulation_report(*n_min, *n_max)?;
            let report = if cli.trace { report } else { report.without_traces() };
            Ok(to_value(&report))
        }
        Command::Tate { terms } => {
            let model = TateModel::build(cli.p, cli.prec, cli.series_order)?;
            let j = model.j_series()?;
            Ok(json!({
                "p": cli.p,
                "prec": cli.prec,
                "series_order": cli.series_order,
                "a4": coeffs(model.a4_series(), *terms),
                "a6": coeffs(model.a6_series(), *terms),
                "jinv": coeffs(model.jinv_series(), *terms),
                "q_of_jinv": coeffs(model.q_of_jinv_series(), *terms),
                "j_lead_offset": j.offset(),
                "j": coeffs(&j, *terms),
            }))
        }
        Command::TorsionScan(a) => {
            let e = curve(cli, &a.curve)?;
            Ok(to_value(&torsion_scan(&e, a.max_order, a.disk_val, a.depth)?))
        }
        Command::Separation(a) => {
            let e = curve(cli, &a.curve)?;
            Ok(to_value(&separation_check(&e, a.max_order, a.disk_val, a.depth)?))
        }
        Command::EllLog { curve: c, x, y } => {
            let e = curve(cli, c)?;
            let pt = match (x, y) {
                (Some(x), Some(y)) => {
                    e.point(Padic::parse_rational(x, cli.p, cli.prec)?, Padic::parse_rational(y, cli.p, cli.prec)?)?
                }
                _ => CurvePoint::Infinity,
            };
            let fl = FormalLog::for_curve(&e)?;
            let log = fl.log(&pt)?;
            let log2 = fl.log(&e.double(&pt)?)?;
            let diff = &log2 - &log.mul_int(2);
            if !diff.is_zero() {
                return Err(Error::Invariant(format!("log(2P) - 2 log(P) = {diff}")));
            }
            Ok(json!({
                "point": pt,
                "log": log,
                "doubling_check": {
                    "log_2p": log2,
                    "agreement_digits": (!diff.is_exact_zero()).then(|| diff.prec()),
                },
            }))
        }
    }
}

fn emit(cli_output: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match cli_output {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            println!("{}", error_json("usage", e.to_string().trim()));
            return ExitCode::from(1);
        }
    };
    let result = validate(&cli).and_then(|_| run(&cli));
    match result {
        Ok(v) => {
            let text = serde_json::to_string(&v).expect("json values serialize");
            if let Err(e) = emit(cli.output.as_ref(), &text) {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
                println!("{}", error_json("io", &e.to_string()));
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", error_json(e.kind(), &e.to_string()));
            ExitCode::from(exit_code(&e))
        }
    }
}
