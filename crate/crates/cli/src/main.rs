//! Command line front end: reproduce the reference count table and run
//! individual verifications, emitting machine-readable reports.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use grs_core::census::{self, CountReport, DEFAULT_NODE_BUDGET};
use grs_core::formulas;
use grs_core::geom;
use grs_core::gf::{Field, FieldSpec};
use grs_core::nrcauto;
use grs_core::Error;

#[derive(Parser)]
#[command(name = "grs", version, about = "Exact GRS/MDS code counting and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the 15-row GRS/MDS count table; each cell is verified by
    /// enumeration when it fits the node budget. Exits nonzero on any
    /// mismatch.
    Table1(Table1Args),
    /// Run one named verification and write a count report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Node budget for the verification searches.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: grs-count, mds-count, orbit, fiber, ratio, dim2,
    /// equivariance, asymptotics, hyperovals.
    name: String,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Seed for sampled checks; exhaustive checks ignore it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let workers = match &cli.command {
        Command::Table1(a) => a.workers,
        Command::Verify(a) => a.workers,
    };
    let run_inner = || match cli.command {
        Command::Table1(args) => cmd_table1(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .context("building worker pool")?;
            pool.install(run_inner)
        }
        None => run_inner(),
    }
}

fn field_for(q: u64) -> Result<Field> {
    FieldSpec::for_order(q).map_err(|e| anyhow!("building GF({q}): {e}"))
}

fn cmd_table1(args: &Table1Args) -> Result<ExitCode> {
    struct Row {
        q: u64,
        n: u64,
        grs: String,
        mds: String,
        verified: bool,
    }

    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    let mut over_budget = Vec::new();
    for (q, n, grs, mds) in formulas::table1_rows() {
        let mut verified = false;
        // The q=9, n=10 row rests on the classification of ovals in odd
        // characteristic and is reported formula-only.
        if (q, n) != (9, 10) {
            let field = field_for(q)?;
            match census::count_grs_among_mds_dim3(&field, n as usize, Some(args.budget)) {
                Ok((mds_observed, grs_observed)) => {
                    if mds_observed == mds && grs_observed == grs {
                        verified = true;
                    } else {
                        mismatches.push(format!(
                            "q={q} n={n}: enumeration found (mds={mds_observed}, grs={grs_observed}), formulas give (mds={mds}, grs={grs})"
                        ));
                    }
                }
                Err(Error::TooLarge(_)) => over_budget.push(format!("q={q} n={n}")),
                Err(e) => bail!("verifying q={q} n={n}: {e}"),
            }
        }
        rows.push(Row {
            q,
            n,
            grs: grs.to_string(),
            mds: mds.to_string(),
            verified,
        });
    }

    let body = match args.format {
        Format::Json => {
            let value: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "q": r.q,
                        "n": r.n,
                        "grs": r.grs,
                        "mds": r.mds,
                        "verified": r.verified,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&value)? + "\n"
        }
        Format::Csv => {
            let mut out = String::from("q,n,grs,mds,verified\n");
            for r in &rows {
                out.push_str(&format!("{},{},{},{},{}\n", r.q, r.n, r.grs, r.mds, r.verified));
            }
            out
        }
    };
    emit(&body, args.out.as_deref())?;

    for m in &mismatches {
        eprintln!("MISMATCH {m}");
    }
    if !mismatches.is_empty() {
        return Ok(ExitCode::from(1));
    }
    if !over_budget.is_empty() {
        eprintln!(
            "budget {} exhausted; unverified cells: {}",
            args.budget,
            over_budget.join(", ")
        );
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let reports = dispatch_verify(args)?;
    let body = match args.format {
        Format::Json => {
            let values: Vec<serde_json::Value> = reports.iter().map(report_json).collect();
            serde_json::to_string_pretty(&values)? + "\n"
        }
        Format::Csv => {
            let mut out =
                String::from("label,q,k,n,r,expected,observed,workers,elapsed_ms,match\n");
            for r in &reports {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.label,
                    r.q,
                    opt(r.k),
                    opt(r.n),
                    opt(r.r),
                    r.expected,
                    r.observed,
                    r.workers,
                    r.elapsed_ms,
                    r.matched
                ));
            }
            out
        }
    };
    emit(&body, args.out.as_deref())?;
    if reports.iter().all(|r| r.matched) {
        Ok(ExitCode::SUCCESS)
    } else {
        for r in reports.iter().filter(|r| !r.matched) {
            eprintln!(
                "MISMATCH {}: expected {}, observed {}",
                r.label, r.expected, r.observed
            );
        }
        Ok(ExitCode::from(1))
    }
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn report_json(r: &CountReport) -> serde_json::Value {
    json!({
        "label": r.label,
        "params": { "q": r.q, "k": r.k, "n": r.n, "r": r.r },
        "expected": r.expected.to_string(),
        "observed": r.observed.to_string(),
        "method": r.method,
        "workers": r.workers,
        "elapsed_ms": r.elapsed_ms as u64,
        "match": r.matched,
    })
}

fn emit(body: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str, name: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("verify {name} requires --{flag}"))
}

fn dispatch_verify(args: &VerifyArgs) -> Result<Vec<CountReport>> {
    let name = args.name.as_str();
    let reports = match name {
        "grs-count" => {
            let q = require(args.q, "q", name)?;
            let n = require(args.n, "n", name)?;
            let k = args.k.unwrap_or(3);
            vec![census::verify_grs_count(&field_for(q)?, k, n)?]
        }
        "mds-count" => {
            let q = require(args.q, "q", name)?;
            let n = require(args.n, "n", name)?;
            vec![census::verify_mds_count(&field_for(q)?, n, Some(args.budget))?]
        }
        "orbit" => {
            let q = require(args.q, "q", name)?;
            let k = require(args.k, "k", name)?;
            let n = require(args.n, "n", name)?;
            vec![census::verify_orbit_partition(&field_for(q)?, k, n)?]
        }
        "fiber" => {
            let q = args.q.unwrap_or(8);
            let r = require(args.r, "r", name)?;
            vec![census::verify_fiber(&field_for(q)?, r, 20, args.seed)?]
        }
        "ratio" => {
            let q = args.q.unwrap_or(8);
            let r = require(args.r, "r", name)?;
            census::verify_ratio(&field_for(q)?, r, true)?
        }
        "dim2" => {
            let q = require(args.q, "q", name)?;
            let n = require(args.n, "n", name)?;
            vec![census::verify_dim2_equality(&field_for(q)?, n, Some(args.budget))?]
        }
        "equivariance" => {
            let q = args.q.unwrap_or(5);
            let ks = match args.k {
                Some(k) => vec![k],
                None => vec![3, 4],
            };
            vec![verify_equivariance(&field_for(q)?, &ks)?]
        }
        "asymptotics" => vec![verify_asymptotics(args.n)?],
        "hyperovals" => {
            let q = require(args.q, "q", name)?;
            vec![census::verify_hyperovals(&field_for(q)?)?]
        }
        other => bail!(
            "unknown verification '{other}'; expected one of grs-count, mds-count, orbit, fiber, ratio, dim2, equivariance, asymptotics, hyperovals"
        ),
    };
    Ok(reports)
}

/// Exhaustive equivariance check over all invertible 2x2 matrices and all
/// points of P^1, for each requested dimension.
fn verify_equivariance(field: &Field, ks: &[usize]) -> Result<CountReport> {
    let start = Instant::now();
    let q = field.q();
    let mut failures = 0u64;
    let mut cases = 0u64;
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let Ok(g) = nrcauto::Mobius::new(
                        field,
                        field.element(a),
                        field.element(b),
                        field.element(c),
                        field.element(d),
                    ) else {
                        continue;
                    };
                    for t in geom::p1_points(field) {
                        for &k in ks {
                            cases += 1;
                            if !nrcauto::check_equivariance(field, &g, k, t)
                                .map_err(|e| anyhow!("equivariance at k={k}: {e}"))?
                            {
                                failures += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut report = census::CountReport {
        label: format!("equivariance q={q} k={ks:?}"),
        q,
        k: ks.first().map(|&k| k as u64),
        n: None,
        r: None,
        expected: 0u64.into(),
        observed: failures.into(),
        method: format!("exhaustive over GL2 x P1, {cases} cases"),
        workers: rayon::current_num_threads(),
        elapsed_ms: start.elapsed().as_millis(),
        matched: failures == 0,
    };
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Exact leading-coefficient checks of the count polynomials: the GRS
/// expansion for n (or n = 6..12) and the closed MDS polynomial part for
/// n in 6..9.
fn verify_asymptotics(n: Option<usize>) -> Result<CountReport> {
    let start = Instant::now();
    let range: Vec<u64> = match n {
        Some(n) => vec![n as u64],
        None => (6..=12).collect(),
    };
    let mut failures = 0u64;
    let mut cases = 0u64;
    for &n in &range {
        if n >= 6 {
            cases += 1;
            if !formulas::check_asymptotic_grs(n) {
                failures += 1;
            }
        }
        if (6..=9).contains(&n) {
            cases += 1;
            if !formulas::check_asymptotic_mds3(n).map_err(|e| anyhow!("mds3 at n={n}: {e}"))? {
                failures += 1;
            }
        }
    }
    Ok(census::CountReport {
        label: format!("asymptotics n={range:?}"),
        q: 0,
        k: None,
        n: range.first().copied(),
        r: None,
        expected: 0u64.into(),
        observed: failures.into(),
        method: format!("exact rational coefficient comparison, {cases} polynomial checks"),
        workers: rayon::current_num_threads(),
        elapsed_ms: start.elapsed().as_millis(),
        matched: failures == 0,
    })
}
