//! `quatisom`: batch classification, sampling, region maps and self-test.

mod region_map;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use quatisom_core::checks::{all_checks, CheckConfig};
use quatisom_core::{classify, sample_indexed, Error, QMatrix2, SamplerKind, Tolerance, DEFAULT_EPS};
use rayon::prelude::*;
use serde_json::{json, Value};

use region_map::{Grid, Range};

#[derive(Parser, Debug)]
#[command(name = "quatisom", version, about = "Classify Sp(1,1) elements as elliptic, parabolic or loxodromic")]
struct Cli {
    /// Base numerical tolerance, in (0, 1e-2).
    #[arg(long, global = true, env = "QUATISOM_TOL", default_value_t = DEFAULT_EPS)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify JSON-lines matrix records.
    Classify(ClassifyArgs),
    /// Emit seeded Sp(1,1) samples with their reports.
    Sample(SampleArgs),
    /// Label a grid of (tau, rho) invariants by region.
    RegionMap(RegionMapArgs),
    /// Run the invariant suite and print a pass/fail table.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Input file, `-` for standard input.
    #[arg(long, default_value = "-")]
    input: String,
    /// Output file, `-` for standard output.
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    count: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = SamplerKind::Generic)]
    kind: SamplerKind,
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct RegionMapArgs {
    /// Trace range `A:B`.
    #[arg(long, allow_hyphen_values = true)]
    tau: Range,
    /// Second invariant range `C:D`.
    #[arg(long, allow_hyphen_values = true)]
    rho: Range,
    #[arg(long)]
    step: f64,
    /// Also write an SVG rendering of the regions.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = CheckConfig::default().seed)]
    seed: u64,
    #[arg(long, default_value = "-")]
    output: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if !(cli.tol > 0.0 && cli.tol < 1e-2) {
        bail!("tolerance must lie in (0, 1e-2), got {}", cli.tol);
    }
    let tol = Tolerance::new(cli.tol);
    match cli.command {
        Command::Classify(a) => cmd_classify(&a, tol),
        Command::Sample(a) => cmd_sample(&a, tol),
        Command::RegionMap(a) => cmd_region_map(&a, tol),
        Command::Selftest(a) => cmd_selftest(&a, tol),
    }
}

fn open_output(path: &str) -> Result<Box<dyn Write>> {
    Ok(if path == "-" {
        Box::new(BufWriter::new(io::stdout().lock()))
    } else {
        Box::new(BufWriter::new(File::create(path).with_context(|| format!("cannot create {path}"))?))
    })
}

fn read_input(path: &str) -> Result<Vec<String>> {
    let reader: Box<dyn Read> = if path == "-" {
        Box::new(io::stdin().lock())
    } else {
        Box::new(File::open(path).with_context(|| format!("cannot open {path}"))?)
    };
    BufReader::new(reader).lines().collect::<io::Result<_>>().context("cannot read input")
}

fn status(all_ok: bool) -> ExitCode {
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

/// Report of `p`, or an error object with the report attached when the
/// cross-checks disagree.
fn report_value(p: &QMatrix2, tol: Tolerance) -> (bool, Value) {
    match classify(p, tol) {
        Ok(r) => (true, serde_json::to_value(&r).expect("report serializes")),
        Err(Error::Inconsistent(r)) => {
            let msg = Error::Inconsistent(r.clone()).to_string();
            (false, json!({ "error": msg, "report": *r }))
        }
        Err(e) => (false, json!({ "error": e.to_string() })),
    }
}

fn classify_line(line: &str, tol: Tolerance) -> (bool, Value) {
    match serde_json::from_str::<QMatrix2>(line) {
        Ok(p) => report_value(&p, tol),
        Err(e) => (false, json!({ "error": format!("malformed record: {e}") })),
    }
}

fn cmd_classify(a: &ClassifyArgs, tol: Tolerance) -> Result<ExitCode> {
    let lines = read_input(&a.input)?;
    let records: Vec<(usize, &str)> =
        lines.iter().enumerate().filter(|(_, l)| !l.trim().is_empty()).map(|(i, l)| (i + 1, l.as_str())).collect();
    let results: Vec<(bool, Value)> = records
        .par_iter()
        .map(|&(n, line)| {
            let (ok, v) = classify_line(line, tol);
            if ok {
                (ok, v)
            } else {
                let mut obj = json!({ "line": n });
                obj.as_object_mut().unwrap().extend(v.as_object().unwrap().clone());
                (ok, obj)
            }
        })
        .collect();
    let mut out = open_output(&a.output)?;
    for (_, v) in &results {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(status(results.iter().all(|(ok, _)| *ok)))
}

fn cmd_sample(a: &SampleArgs, tol: Tolerance) -> Result<ExitCode> {
    if a.count == 0 {
        bail!("count must be at least 1");
    }
    let results: Vec<(bool, Value)> = (0..a.count as u64)
        .into_par_iter()
        .map(|i| {
            let p = sample_indexed(a.seed, i, a.kind);
            let (ok, report) = report_value(&p, tol);
            (ok, json!({ "index": i, "kind": a.kind.as_str(), "matrix": p, "report": report }))
        })
        .collect();
    let mut out = open_output(&a.output)?;
    for (_, v) in &results {
        writeln!(out, "{v}")?;
    }
    out.flush()?;
    Ok(status(results.iter().all(|(ok, _)| *ok)))
}

fn cmd_region_map(a: &RegionMapArgs, tol: Tolerance) -> Result<ExitCode> {
    let grid = Grid::new(a.tau, a.rho, a.step)?;
    let mut out = open_output(&a.output)?;
    region_map::write_csv(&mut out, &grid, tol)?;
    out.flush()?;
    if let Some(path) = &a.svg {
        let mut f = BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
        region_map::write_svg(&mut f, &grid, tol)?;
        f.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(a: &SelftestArgs, tol: Tolerance) -> Result<ExitCode> {
    if a.trials == 0 {
        bail!("trials must be at least 1");
    }
    let cfg = CheckConfig { trials: a.trials, seed: a.seed, tol, threshold: None };
    let results: Vec<_> = all_checks().par_iter().map(|check| check(&cfg)).collect();
    let mut out = open_output(&a.output)?;
    let width = results.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    writeln!(out, "{:<width$}  {:>6}  {:>8}  {:>10}  {:>10}", "check", "result", "failures", "worst", "threshold")?;
    for r in &results {
        let verdict = if r.passed() { "PASS" } else { "FAIL" };
        let pad = width - r.name.chars().count();
        writeln!(
            out,
            "{}{}  {:>6}  {:>8}  {:>10.3e}  {:>10.3e}",
            r.name,
            " ".repeat(pad),
            verdict,
            r.failures,
            r.worst,
            r.threshold
        )?;
        if let Some(f) = &r.first_failure {
            writeln!(out, "    first failure: {f}")?;
        }
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    writeln!(
        out,
        "{passed}/{} checks passed ({} trials, seed {}, tol {:e})",
        results.len(),
        a.trials,
        a.seed,
        tol.eps
    )?;
    out.flush()?;
    Ok(status(passed == results.len()))
}
