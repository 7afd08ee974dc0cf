//! Acceptance criteria 1 to 9, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the output;
//! the process exits non-zero if any criterion fails.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use quatisom_core::checks::{self, mixed_sample, CheckConfig, CheckResult};
use quatisom_core::representation::{invariants_unchecked as invariants, poly_roots};
use quatisom_core::{
    classify, classify_by_fixed_points, classify_unchecked, discriminant_factors, eigenvalues_closed_form,
    eigenvalues_oracle, is_sp11, mobius_apply, structural_diag_test, sylvester_resultant, CaseTag, Complex, QMatrix2,
    QuarticCoeffs, Quaternion, Region, Tolerance, Verdict,
};
use serde_json::Value;

const SEED: u64 = 20240601;
const EXAMPLE_INVARIANTS: f64 = 1e-12;
const EXAMPLE_RESIDUAL: f64 = 1e-8;
const EXAMPLE_RUNTIME: Duration = Duration::from_millis(1);
const MIXED_SAMPLES: u64 = 10_000;
const MIXED_RUNTIME: Duration = Duration::from_secs(30);
const CLOSED_FORM_DEVIATION: f64 = 1e-8;
const RESULTANT_POINTS: usize = 1_000;
const RESULTANT_REL: f64 = 1e-8;
const RESULTANT_RUNTIME: Duration = Duration::from_secs(1);
const REPRESENTATION_PAIRS: usize = 1_000;
const REPRESENTATION_TOL: f64 = 1e-9;
const REPRESENTATION_RUNTIME: Duration = Duration::from_secs(1);
const GEOMETRY_INSTANCES: usize = 10_000;
const GEOMETRY_RUNTIME: Duration = Duration::from_secs(10);
const INVARIANCE_TRIALS: usize = 5_000;
const INVARIANCE_TOL: f64 = 1e-8;
/// Cases near `cos(theta) = 0`: `|tau| / (|l1| + 1/|l1|)` below this.
const NEAR_ZERO_COS: f64 = 1e-2;

type Criterion = fn(Tolerance) -> Outcome;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn q(w: f64, x: f64) -> Quaternion {
    Quaternion::new(w, x, 0.0, 0.0)
}

/// Median wall time of `runs` calls.
fn median_time(runs: usize, mut f: impl FnMut()) -> Duration {
    let mut times: Vec<Duration> = (0..runs)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .collect();
    times.sort();
    times[runs / 2]
}

fn criterion_1(tol: Tolerance) -> Outcome {
    let p = QMatrix2::new(q(1.0, 1.0), q(1.0, 0.0), q(-1.0, 0.0), q(-1.0, 1.0));
    let member = is_sp11(&p, tol);
    let c = invariants(&p);
    let inv_err = c.tau.abs().max((c.rho - 2.0).abs());
    let report = match classify(&p, tol) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("classify failed: {e}")),
    };
    let lambda_err =
        (report.eigenvalues.lambda1 - Complex::i()).norm().max((report.eigenvalues.lambda2 - Complex::i()).norm());
    let boundary: Vec<_> = report.fixed_points.boundary().filter_map(|f| f.x).collect();
    let single = boundary.len() == 1 && report.fixed_points.points.len() == 1;
    let x_err = boundary.first().map_or(f64::INFINITY, |x| (*x + Quaternion::ONE).norm());
    let fix_err =
        boundary.first().and_then(|x| mobius_apply(&p, *x, tol).ok().map(|y| (y - *x).norm())).unwrap_or(f64::INFINITY);
    let runtime = median_time(21, || {
        classify(&p, tol).unwrap();
    });
    let pass = member
        && inv_err <= EXAMPLE_INVARIANTS
        && report.verdict.verdict() == Verdict::Parabolic
        && lambda_err <= EXAMPLE_RESIDUAL
        && single
        && x_err <= EXAMPLE_RESIDUAL
        && fix_err <= EXAMPLE_RESIDUAL
        && runtime < EXAMPLE_RUNTIME;
    outcome(
        pass,
        format!(
            "member={member} (tau,rho) err {inv_err:.1e}<={EXAMPLE_INVARIANTS:e}, verdict {}, |lambda-i| {lambda_err:.1e}, \
             boundary points {}, |x+1| {x_err:.1e}, |f(x)-x| {fix_err:.1e} <= {EXAMPLE_RESIDUAL:e}, median {runtime:?} < {EXAMPLE_RUNTIME:?}",
            report.verdict.verdict(),
            boundary.len()
        ),
    )
}

fn criterion_2(tol: Tolerance) -> Outcome {
    let p = QMatrix2::new(q(1.0, 1.0), Quaternion::new(0.0, -1.0, 0.0, 0.0), q(0.0, 1.0), q(1.0, -1.0));
    let c = invariants(&p);
    let inv_err = (c.tau - 2.0).abs().max((c.rho - 6.0).abs());
    let verdict = |m: &QMatrix2| classify(m, tol).map(|r| (r.verdict.verdict(), r.region));
    let tangency = verdict(&p);
    let id = verdict(&QMatrix2::identity());
    let minus = verdict(&QMatrix2::identity().left_scale(Quaternion::real(-1.0)));
    let runtime = median_time(21, || {
        classify(&p, tol).unwrap();
    });
    let pass = inv_err <= EXAMPLE_INVARIANTS
        && matches!(tangency, Ok((Verdict::Parabolic, Region::TangencyPoint)))
        && matches!(id, Ok((Verdict::Identity, _)))
        && matches!(minus, Ok((Verdict::MinusIdentity, _)))
        && runtime < EXAMPLE_RUNTIME;
    outcome(
        pass,
        format!(
            "(tau,rho) err {inv_err:.1e}, tangency {:?}, I {:?}, -I {:?}, median {runtime:?} < {EXAMPLE_RUNTIME:?}",
            tangency.map(|v| v.0),
            id.map(|v| v.0),
            minus.map(|v| v.0)
        ),
    )
}

/// Region verdict, eigen-case verdict and fixed-point verdict of one sample.
fn three_verdicts(p: &QMatrix2, tol: Tolerance) -> Result<Option<[Verdict; 3]>, String> {
    let report = classify_unchecked(p, tol).map_err(|e| e.to_string())?;
    if matches!(report.verdict.verdict(), Verdict::Identity | Verdict::MinusIdentity) {
        return Ok(None);
    }
    let structural = structural_diag_test(p, tol);
    let region =
        report.region.forced_verdict().unwrap_or(if structural { Verdict::Elliptic } else { Verdict::Parabolic });
    let coeffs = invariants(p);
    let case = eigenvalues_oracle(&coeffs, tol).map_err(|e| e.to_string())?.case_tag;
    let eigen = quatisom_core::classify::verdict_from_case(case, structural);
    let fixed = classify_by_fixed_points(p, tol).map_err(|e| e.to_string())?;
    Ok(Some([region, eigen, fixed]))
}

fn criterion_3(tol: Tolerance) -> Outcome {
    let start = Instant::now();
    let mut exceptions = 0;
    let mut first = None;
    for i in 0..MIXED_SAMPLES {
        let p = mixed_sample(SEED, i);
        match three_verdicts(&p, tol) {
            Ok(None) => {}
            Ok(Some([a, b, c])) if a == b && b == c => {}
            Ok(Some(v)) => {
                exceptions += 1;
                first.get_or_insert(format!("sample {i}: {v:?}"));
            }
            Err(e) => {
                exceptions += 1;
                first.get_or_insert(format!("sample {i}: {e}"));
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        exceptions == 0 && elapsed < MIXED_RUNTIME,
        format!(
            "{MIXED_SAMPLES} samples, {exceptions} exceptions{}, {elapsed:.2?} < {MIXED_RUNTIME:?}",
            first.map_or(String::new(), |f| format!(" (first {f})"))
        ),
    )
}

fn criterion_4(tol: Tolerance) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut outer = 0;
    let mut near_zero_cos = 0;
    for i in 0..MIXED_SAMPLES {
        let c = invariants(&mixed_sample(SEED, i));
        let (a, b) = match (eigenvalues_closed_form(&c, tol), eigenvalues_oracle(&c, tol)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                failures += 1;
                continue;
            }
        };
        let dev = a.deviation(&b);
        worst = worst.max(dev);
        if dev > CLOSED_FORM_DEVIATION || a.case_tag != b.case_tag {
            failures += 1;
        }
        if a.case_tag == CaseTag::III && classify_region(&c, tol) == Region::ParabolaOuter {
            outer += 1;
        }
        if a.case_tag == CaseTag::VII {
            let r = a.lambda1.norm();
            if c.tau.abs() / (r + 1.0 / r) < NEAR_ZERO_COS {
                near_zero_cos += 1;
            }
        }
    }
    outcome(
        failures == 0 && outer > 0 && near_zero_cos > 0,
        format!(
            "max deviation {worst:.2e} <= {CLOSED_FORM_DEVIATION:e}, {failures} failures; covered: {near_zero_cos} case vii with |cos| < {NEAR_ZERO_COS:e}, {outer} case iii on the outer parabola"
        ),
    )
}

fn classify_region(c: &QuarticCoeffs, tol: Tolerance) -> Region {
    quatisom_core::region_of(c, tol)
}

/// `Res(f, f') = 4^4 prod f(mu)` over the critical points `mu` of `f`.
fn product_formula(c: &QuarticCoeffs) -> f64 {
    let df = [4.0, -6.0 * c.tau, 2.0 * c.rho, -2.0 * c.tau].map(|x| Complex::new(x, 0.0));
    let crit = poly_roots(&df).expect("cubic roots");
    let prod: Complex = crit.iter().map(|&mu| c.eval(mu)).product();
    256.0 * prod.re
}

fn criterion_5(_tol: Tolerance) -> Outcome {
    let start = Instant::now();
    let r00 = product_formula(&QuarticCoeffs::new(0.0, 0.0));
    let r01 = product_formula(&QuarticCoeffs::new(0.0, 1.0));
    let factors = |t: f64, r: f64| {
        let (f1, f2, f3) = discriminant_factors(&QuarticCoeffs::new(t, r));
        f1 * f2 * f3 * f3
    };
    let k00 = r00 / factors(0.0, 0.0);
    let k01 = r01 / factors(0.0, 1.0);
    let constant_ok = (r00 - 256.0).abs() <= 1e-9
        && (r01 - 144.0).abs() <= 1e-9
        && (k00 - 16.0).abs() <= 1e-9
        && (k01 - 16.0).abs() <= 1e-9
        && (sylvester_resultant(&QuarticCoeffs::new(0.0, 0.0)) - r00).abs() <= 1e-9
        && (sylvester_resultant(&QuarticCoeffs::new(0.0, 1.0)) - r01).abs() <= 1e-9;
    let cfg =
        CheckConfig { trials: RESULTANT_POINTS, seed: SEED, threshold: Some(RESULTANT_REL), ..CheckConfig::default() };
    let grid = checks::resultant_identity(&cfg);
    let elapsed = start.elapsed();
    outcome(
        constant_ok && grid.passed() && elapsed < RESULTANT_RUNTIME,
        format!(
            "product formula (0,0) -> {r00:.6}, (0,1) -> {r01:.6}, constant {k00:.6}/{k01:.6}; {} grid points worst rel {:.2e} <= {RESULTANT_REL:e}; {elapsed:.2?} < {RESULTANT_RUNTIME:?}",
            grid.trials, grid.worst
        ),
    )
}

fn suite_line(results: &[CheckResult]) -> String {
    results
        .iter()
        .map(|r| {
            format!("{} {}/{} worst {:.1e} <= {:.0e}", r.name, r.trials - r.failures, r.trials, r.worst, r.threshold)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn run_suite(cfg: &CheckConfig, list: &[fn(&CheckConfig) -> CheckResult], limit: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let results: Vec<_> = list.iter().map(|f| f(cfg)).collect();
    let elapsed = start.elapsed();
    let ok = results.iter().all(CheckResult::passed) && limit.is_none_or(|l| elapsed < l);
    let firsts: Vec<_> =
        results.iter().filter_map(|r| r.first_failure.as_ref().map(|f| format!("{}: {f}", r.name))).collect();
    let mut detail = match limit {
        Some(l) => format!("{}; {elapsed:.2?} < {l:?}", suite_line(&results)),
        None => format!("{}; {elapsed:.2?}", suite_line(&results)),
    };
    if !firsts.is_empty() {
        detail.push_str(&format!(" [{}]", firsts.join("; ")));
    }
    outcome(ok, detail)
}

fn criterion_6(tol: Tolerance) -> Outcome {
    let cfg = CheckConfig { trials: REPRESENTATION_PAIRS, seed: SEED, tol, threshold: Some(REPRESENTATION_TOL) };
    run_suite(
        &cfg,
        &[checks::chi_homomorphism, checks::chi_det_one, checks::char_poly_agreement],
        Some(REPRESENTATION_RUNTIME),
    )
}

fn criterion_7(tol: Tolerance) -> Outcome {
    let cfg = CheckConfig { trials: GEOMETRY_INSTANCES, seed: SEED, tol, threshold: None };
    run_suite(
        &cfg,
        &[
            checks::form_preservation,
            checks::ball_preservation,
            checks::group_action,
            checks::eigenvector_form_relations,
        ],
        Some(GEOMETRY_RUNTIME),
    )
}

fn criterion_8(tol: Tolerance) -> Outcome {
    let cfg = CheckConfig { trials: INVARIANCE_TRIALS, seed: SEED, tol, threshold: Some(INVARIANCE_TOL) };
    run_suite(&cfg, &[checks::conjugation_invariance, checks::inverse_invariance], None)
}

// ---------------------------------------------------------------------- CLI

fn quatisom(args: &[&str], stdin: Option<&str>) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_quatisom"))
        .args(args)
        .env_remove("QUATISOM_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn quatisom");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("valid JSON line")).collect()
}

fn criterion_9() -> Outcome {
    let mut failed = Vec::new();
    let mut expect = |ok: bool, what: &str| {
        if !ok {
            failed.push(what.to_string());
        }
    };

    let c1 = quatisom(&["classify", "--input", &fixture("matrices.jsonl")], None);
    let c2 = quatisom(&["classify", "--input", &fixture("matrices.jsonl")], None);
    let verdicts: Vec<_> = json_lines(&c1).iter().map(|v| v["verdict"].as_str().unwrap_or("").to_string()).collect();
    expect(c1.status.code() == Some(0), "classify exit 0");
    expect(c1.stdout == c2.stdout, "classify deterministic");
    expect(
        verdicts == ["parabolic", "parabolic", "identity", "minus_identity", "loxodromic", "elliptic"],
        "classify fixture verdicts",
    );

    let rej = quatisom(&["classify", "--input", &fixture("rejected.jsonl")], None);
    let rows = json_lines(&rej);
    expect(rej.status.code() == Some(2), "rejected records exit 2");
    expect(rows.len() == 3 && rows[0]["error"] == "not in Sp(1,1)" && rows[1]["error"].is_string(), "error objects");
    expect(
        quatisom(&["classify", "--input", &fixture("missing.jsonl")], None).status.code() == Some(1),
        "unreadable exit 1",
    );

    let s1 = quatisom(&["sample", "--count", "50", "--seed", "7", "--kind", "near-parabolic"], None);
    let s2 = quatisom(&["sample", "--count", "50", "--seed", "7", "--kind", "near-parabolic"], None);
    expect(s1.status.code() == Some(0) && s1.stdout == s2.stdout, "sample byte-identical per seed");
    let records: Vec<String> = json_lines(&s1).iter().map(|v| v["matrix"].to_string()).collect();
    let round = quatisom(&["classify"], Some(&(records.join("\n") + "\n")));
    let reports: Vec<Value> = json_lines(&s1).into_iter().map(|v| v["report"].clone()).collect();
    expect(round.status.code() == Some(0) && json_lines(&round) == reports, "sample -> classify round trip");

    let map = quatisom(&["region-map", "--tau", "-3:3", "--rho", "-2:11", "--step", "0.5"], None);
    let csv = String::from_utf8_lossy(&map.stdout).to_string();
    let label = |t: &str, r: &str| {
        csv.lines().find_map(|l| {
            let f: Vec<_> = l.split(',').collect();
            (f[0] == t && f[1] == r).then(|| f[2].to_string())
        })
    };
    expect(csv.starts_with("tau,rho,region,verdict_if_realizable\n"), "region-map header");
    expect(label("0", "2").as_deref() == Some("parabola_arc"), "(0,2) parabola_arc");
    expect(label("2", "6").as_deref() == Some("tangency_point"), "(2,6) tangency_point");
    expect(label("-2", "6").as_deref() == Some("tangency_point"), "(-2,6) tangency_point");
    expect(label("0", "-2").as_deref() == Some("R1_line_boundary"), "(0,-2) R1_line_boundary");
    expect(label("3", "10.5").as_deref() == Some("unrealizable"), "(3,10.5) unrealizable");
    let map2 = quatisom(&["region-map", "--tau", "-3:3", "--rho", "-2:11", "--step", "0.5"], None);
    expect(map.stdout == map2.stdout, "region-map deterministic");

    let st = quatisom(&["selftest", "--trials", "100"], None);
    let st2 = quatisom(&["selftest", "--trials", "100"], None);
    expect(st.status.code() == Some(0), "selftest passes");
    let strip = |o: &Output| {
        String::from_utf8_lossy(&o.stdout)
            .lines()
            .filter(|l| l.contains("PASS") || l.contains("FAIL"))
            .map(str::to_string)
            .collect::<Vec<_>>()
    };
    expect(strip(&st) == strip(&st2), "selftest table deterministic");
    let strict = quatisom(&["selftest", "--trials", "100", "--tol", "1e-15"], None);
    expect(
        strict.status.code() == Some(2) && String::from_utf8_lossy(&strict.stdout).contains("FAIL"),
        "unattainable tolerance fails",
    );

    outcome(
        failed.is_empty(),
        if failed.is_empty() { "all CLI contracts hold".into() } else { format!("failed: {}", failed.join(", ")) },
    )
}

fn main() {
    let tol = Tolerance::default();
    let criteria: [(&str, Criterion); 8] = [
        ("example matrix", criterion_1),
        ("tangency and identities", criterion_2),
        ("oracle triple agreement", criterion_3),
        ("closed forms vs root oracle", criterion_4),
        ("resultant identity", criterion_5),
        ("representation laws", criterion_6),
        ("geometry invariants", criterion_7),
        ("conjugation and inverse invariance", criterion_8),
    ];
    let mut all = true;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let o = f(tol);
        all &= o.pass;
        println!("criterion {}: {} {name}: {}", n + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    let o = criterion_9();
    all &= o.pass;
    println!("criterion 9: {} CLI contract: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    if !all {
        std::process::exit(1);
    }
}
