//! Randomized invariant checks.
//!
//! Each check draws `trials` seeded instances, measures a scaled error per
//! instance and compares it with a threshold. The same checks back the
//! `selftest` command and the acceptance tests.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::action::{fixed_points, mobius_apply, Location};
use crate::classify::{classify, principal_angle, IsometryClass, Region, Verdict};
use crate::quaternion::{Complex, Quaternion};
use crate::representation::{
    char_poly_coeffs, chi, cluster_roots, discriminant_factors, has_repeated_root, invariants_unchecked, quartic_roots,
    resultant_vanishes, sylvester_resultant, QMatrix2, QuarticCoeffs,
};
use crate::sp11::{
    herm_form, is_sp11, sample_indexed, sp11_inverse, unit_quaternion, vector_sign, HVector, SamplerKind, VectorSign,
};
use crate::spectrum::{eigenvalues_closed_form, eigenvalues_oracle, CaseTag};
use crate::tolerance::Tolerance;

/// Parameters shared by all checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckConfig {
    pub trials: usize,
    pub seed: u64,
    pub tol: Tolerance,
    /// Replaces every check's own threshold when set.
    pub threshold: Option<f64>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { trials: 1000, seed: 20240601, tol: Tolerance::default(), threshold: None }
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest measured error.
    pub worst: f64,
    pub threshold: f64,
    pub elapsed: Duration,
    /// First failure, for diagnosis.
    pub first_failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Trial<'a> = dyn FnMut(u64, &mut ChaCha8Rng) -> std::result::Result<f64, String> + 'a;

fn run(name: &'static str, default_thr: f64, cfg: &CheckConfig, trial: &mut Trial<'_>) -> CheckResult {
    let threshold = cfg.threshold.unwrap_or(default_thr);
    let start = Instant::now();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut first_failure = None;
    let key = name.bytes().fold(cfg.seed, |h, b| h.rotate_left(5) ^ u64::from(b));
    for i in 0..cfg.trials as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(i);
        match trial(i, &mut rng) {
            Ok(err) if err <= threshold => worst = worst.max(err),
            Ok(err) => {
                failures += 1;
                worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
                first_failure.get_or_insert_with(|| format!("trial {i}: error {err:e}"));
            }
            Err(msg) => {
                failures += 1;
                worst = f64::INFINITY;
                first_failure.get_or_insert_with(|| format!("trial {i}: {msg}"));
            }
        }
    }
    CheckResult { name, trials: cfg.trials, failures, worst, threshold, elapsed: start.elapsed(), first_failure }
}

fn pass_fail(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        f64::INFINITY
    }
}

fn gauss<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn random_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(gauss(rng), gauss(rng), gauss(rng), gauss(rng))
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R) -> QMatrix2 {
    QMatrix2::new(random_quaternion(rng), random_quaternion(rng), random_quaternion(rng), random_quaternion(rng))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R) -> HVector {
    HVector::new(random_quaternion(rng), random_quaternion(rng))
}

/// `K1 A(t) K2` with `t ~ U(0, 1)`.
pub fn random_conjugator<R: Rng + ?Sized>(rng: &mut R) -> QMatrix2 {
    let k1 = QMatrix2::diag(unit_quaternion(rng), unit_quaternion(rng));
    let k2 = QMatrix2::diag(unit_quaternion(rng), unit_quaternion(rng));
    k1 * QMatrix2::boost(rng.random_range(0.0..1.0)) * k2
}

/// A point of the open ball, or of its boundary when `boundary` is set.
pub fn random_ball_point<R: Rng + ?Sized>(rng: &mut R, boundary: bool) -> Quaternion {
    let u = unit_quaternion(rng);
    let r = if boundary { 1.0 } else { rng.random_range(0.0..1.0f64).powf(0.25) * 0.999 };
    u * r
}

/// Sample `i` cycling through all sampler kinds.
pub fn mixed_sample(seed: u64, i: u64) -> QMatrix2 {
    let kind = SamplerKind::ALL[(i % 4) as usize];
    sample_indexed(seed, i / 4, kind)
}

/// Sample `i` cycling through the given kinds.
pub fn sample_from(kinds: &[SamplerKind], seed: u64, i: u64) -> QMatrix2 {
    let n = kinds.len() as u64;
    sample_indexed(seed, i / n, kinds[(i % n) as usize])
}

fn qdist(a: &QMatrix2, b: &QMatrix2) -> f64 {
    a.distance(b)
}

fn conjugate(q: &QMatrix2, p: &QMatrix2, tol: Tolerance) -> std::result::Result<QMatrix2, String> {
    Ok(*q * *p * sp11_inverse(q, tol).map_err(|e| e.to_string())?)
}

/// Unit `p` with `p^{-1} q p` in `C` with non-negative imaginary part.
pub fn complexifier(q: Quaternion) -> Quaternion {
    let im = q.im();
    let n = im.norm();
    if n == 0.0 {
        return Quaternion::ONE;
    }
    let a = im / n;
    // r a r^{-1} = i for r = normalize(1 - i a); antipodal case handled by j
    let r = Quaternion::ONE - Quaternion::I * a;
    let r = if r.norm() < 1e-8 { Quaternion::J } else { r / r.norm() };
    r.conj()
}

// ---------------------------------------------------------------- quaternion

pub fn quaternion_multiplicativity(cfg: &CheckConfig) -> CheckResult {
    run("quaternion multiplicativity", 1e-12, cfg, &mut |_, rng| {
        let (p, q) = (random_quaternion(rng), random_quaternion(rng));
        Ok(((p * q).norm() - p.norm() * q.norm()).abs() / (1.0 + p.norm() * q.norm()))
    })
}

pub fn quaternion_conjugation(cfg: &CheckConfig) -> CheckResult {
    run("conjugation anti-homomorphism", 1e-12, cfg, &mut |_, rng| {
        let (p, q) = (random_quaternion(rng), random_quaternion(rng));
        Ok(((p * q).conj() - q.conj() * p.conj()).norm() / (1.0 + p.norm() * q.norm()))
    })
}

pub fn quaternion_similarity(cfg: &CheckConfig) -> CheckResult {
    run("similarity invariants", 1e-10, cfg, &mut |_, rng| {
        let q = random_quaternion(rng);
        let u = unit_quaternion(rng);
        let s = u.inv().map_err(|e| e.to_string())? * q * u;
        let (r0, n0) = q.similarity_invariants();
        let (r1, n1) = s.similarity_invariants();
        let rep = (q.canonical_rep() - s.canonical_rep()).norm();
        Ok(((r0 - r1).abs().max((n0 - n1).abs()).max(rep)) / (1.0 + q.norm()))
    })
}

// ------------------------------------------------------------ representation

pub fn chi_homomorphism(cfg: &CheckConfig) -> CheckResult {
    run("chi homomorphism", 1e-10, cfg, &mut |_, rng| {
        let (p, q) = (random_matrix(rng), random_matrix(rng));
        let prod = chi(&(p * q)).distance(&(chi(&p) * chi(&q)));
        let adj = chi(&p.adjoint()).distance(&chi(&p).adjoint());
        Ok(prod.max(adj) / (1.0 + p.max_norm() * q.max_norm()))
    })
}

pub fn chi_det_nonnegative(cfg: &CheckConfig) -> CheckResult {
    run("det chi non-negative", 1e-10, cfg, &mut |_, rng| {
        let p = random_matrix(rng);
        let d = chi(&p).det();
        let scale = (1.0 + chi(&p).max_norm()).powi(4);
        Ok(d.im.abs().max((-d.re).max(0.0)) / scale)
    })
}

pub fn chi_det_one(cfg: &CheckConfig) -> CheckResult {
    run("det chi = 1 on Sp(1,1)", 1e-9, cfg, &mut |i, _| {
        let p = mixed_sample(cfg.seed, i);
        let m = chi(&p);
        Ok((m.det() - 1.0).norm() / (1.0 + m.max_norm()).powi(4))
    })
}

pub fn char_poly_agreement(cfg: &CheckConfig) -> CheckResult {
    run("char poly coefficients", 1e-9, cfg, &mut |i, _| {
        let p = mixed_sample(cfg.seed, i);
        let q = char_poly_coeffs(&p, cfg.tol).map_err(|e| e.to_string())?;
        let m = chi(&p);
        let numeric = m.char_poly();
        let expected = q.coefficients();
        let n = 1.0 + m.max_norm();
        Ok((0..5).map(|k| (numeric[k] - Complex::new(expected[k], 0.0)).norm() / n.powi(k as i32)).fold(0.0, f64::max))
    })
}

pub fn palindromic_symmetry(cfg: &CheckConfig) -> CheckResult {
    run("reciprocal root symmetry", 1e-8, cfg, &mut |i, _| {
        let q = invariants_unchecked(&mixed_sample(cfg.seed, i));
        let roots = quartic_roots(&q).map_err(|e| e.to_string())?;
        let clusters = cluster_roots(&q, &roots, cfg.tol);
        let mut worst: f64 = 0.0;
        for c in &clusters {
            let image = 1.0 / c.center.conj();
            let best = clusters
                .iter()
                .filter(|d| d.multiplicity == c.multiplicity)
                .map(|d| (d.center - image).norm() / image.norm().max(1.0))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
        Ok(worst)
    })
}

fn grid_point<R: Rng + ?Sized>(rng: &mut R) -> QuarticCoeffs {
    QuarticCoeffs::new(rng.random_range(-5.0..5.0), rng.random_range(-10.0..30.0))
}

pub fn resultant_identity(cfg: &CheckConfig) -> CheckResult {
    run("resultant identity", 1e-8, cfg, &mut |_, rng| {
        let q = grid_point(rng);
        let (f1, f2, f3) = discriminant_factors(&q);
        let lhs = sylvester_resultant(&q);
        let rhs = 16.0 * f1 * f2 * f3 * f3;
        Ok((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0))
    })
}

pub fn resultant_roots_equivalence(cfg: &CheckConfig) -> CheckResult {
    run("resultant vs repeated roots", 0.0, cfg, &mut |_, rng| {
        let q = grid_point(rng);
        let repeated = has_repeated_root(&q, cfg.tol).map_err(|e| e.to_string())?;
        Ok(pass_fail(resultant_vanishes(&q, cfg.tol) == repeated))
    })
}

// --------------------------------------------------------------------- sp11

pub fn form_preservation(cfg: &CheckConfig) -> CheckResult {
    run("form preservation", 1e-9, cfg, &mut |i, rng| {
        let p = mixed_sample(cfg.seed, i);
        let (x, y) = (random_vector(rng), random_vector(rng));
        let lhs = herm_form(&p.mul_vec(&x), &p.mul_vec(&y));
        let rhs = herm_form(&x, &y);
        let n = p.max_norm();
        let scale = (1.0 + n * n) * (x.euclidean_norm_sqr() * y.euclidean_norm_sqr()).sqrt();
        Ok((lhs - rhs).norm() / scale)
    })
}

pub fn group_closure(cfg: &CheckConfig) -> CheckResult {
    run("group closure", 0.0, cfg, &mut |i, _| {
        let p = mixed_sample(cfg.seed, i);
        let q = mixed_sample(cfg.seed ^ 0x5eed, i);
        let inv = sp11_inverse(&p, cfg.tol).map_err(|e| e.to_string())?;
        let ok = is_sp11(&(p * q), cfg.tol)
            && is_sp11(&inv, cfg.tol)
            && qdist(&(p * inv), &QMatrix2::identity()) <= cfg.tol.membership() * (1.0 + p.max_norm().powi(2));
        Ok(pass_fail(ok))
    })
}

pub fn orthogonal_complement_sign(cfg: &CheckConfig) -> CheckResult {
    run("orthogonal complement sign", 0.0, cfg, &mut |i, rng| {
        let mut x = random_vector(rng);
        // alternate negative and positive X
        let negative = i % 2 == 0;
        if (x.x1.norm() > x.x2.norm()) == negative {
            x = HVector::new(x.x2, x.x1);
        }
        let y = random_vector(rng);
        let xx = herm_form(&x, &x);
        let coef = xx.inv().map_err(|e| e.to_string())? * herm_form(&x, &y);
        let y = y - x.right_scale(coef);
        let expected = if negative { VectorSign::Positive } else { VectorSign::Negative };
        let sign = vector_sign(&y, cfg.tol).map_err(|e| e.to_string())?;
        Ok(pass_fail(sign == expected))
    })
}

// ----------------------------------------------------------------- spectrum

pub fn oracle_agreement(cfg: &CheckConfig) -> CheckResult {
    run("closed form vs root oracle", 1e-8, cfg, &mut |i, _| {
        let q = invariants_unchecked(&mixed_sample(cfg.seed, i));
        let a = eigenvalues_closed_form(&q, cfg.tol).map_err(|e| e.to_string())?;
        let b = eigenvalues_oracle(&q, cfg.tol).map_err(|e| e.to_string())?;
        if a.case_tag != b.case_tag {
            return Err(format!("case {} vs {}", a.case_tag, b.case_tag));
        }
        Ok(a.deviation(&b))
    })
}

pub fn invariant_reconstruction(cfg: &CheckConfig) -> CheckResult {
    run("invariants from eigenvalues", 1e-9, cfg, &mut |i, _| {
        let q = invariants_unchecked(&mixed_sample(cfg.seed, i));
        let pair = eigenvalues_closed_form(&q, cfg.tol).map_err(|e| e.to_string())?;
        let back = pair.invariants();
        Ok((back.tau - q.tau).abs().max((back.rho - q.rho).abs()) / q.scale())
    })
}

pub fn conjugation_invariance(cfg: &CheckConfig) -> CheckResult {
    run("conjugation invariance", 1e-8, cfg, &mut |i, rng| {
        let p = mixed_sample(cfg.seed, i);
        let q = random_conjugator(rng);
        let p2 = conjugate(&q, &p, cfg.tol)?;
        let (c1, c2) = (invariants_unchecked(&p), invariants_unchecked(&p2));
        let a = eigenvalues_closed_form(&c1, cfg.tol).map_err(|e| e.to_string())?;
        let b = eigenvalues_closed_form(&c2, cfg.tol).map_err(|e| e.to_string())?;
        let r1 = classify(&p, cfg.tol).map_err(|e| e.to_string())?;
        let r2 = classify(&p2, cfg.tol).map_err(|e| e.to_string())?;
        if a.case_tag != b.case_tag || r1.verdict.verdict() != r2.verdict.verdict() {
            return Err(format!("{} {} vs {} {}", a.case_tag, r1.verdict.verdict(), b.case_tag, r2.verdict.verdict()));
        }
        let inv = (c1.tau - c2.tau).abs().max((c1.rho - c2.rho).abs()) / c1.scale();
        Ok(a.deviation(&b).max(inv))
    })
}

pub fn inverse_invariance(cfg: &CheckConfig) -> CheckResult {
    run("inverse invariance", 1e-9, cfg, &mut |i, _| {
        let p = mixed_sample(cfg.seed, i);
        let inv = sp11_inverse(&p, cfg.tol).map_err(|e| e.to_string())?;
        let (c1, c2) = (invariants_unchecked(&p), invariants_unchecked(&inv));
        let r1 = classify(&p, cfg.tol).map_err(|e| e.to_string())?;
        let r2 = classify(&inv, cfg.tol).map_err(|e| e.to_string())?;
        if r1.verdict.verdict() != r2.verdict.verdict() || r1.eigenvalues.case_tag != r2.eigenvalues.case_tag {
            return Err(format!("{} vs {}", r1.verdict.verdict(), r2.verdict.verdict()));
        }
        let inv_err = (c1.tau - c2.tau).abs().max((c1.rho - c2.rho).abs()) / c1.scale();
        Ok(inv_err.max(r1.eigenvalues.deviation(&r2.eigenvalues)))
    })
}

pub fn case_vii_identity(cfg: &CheckConfig) -> CheckResult {
    run("loxodromic screw identity", 1e-9, cfg, &mut |i, _| {
        let q = invariants_unchecked(&mixed_sample(cfg.seed, i));
        let pair = eigenvalues_closed_form(&q, cfg.tol).map_err(|e| e.to_string())?;
        if pair.case_tag != CaseTag::VII {
            return Ok(0.0);
        }
        let (r, th) = (pair.lambda1.norm(), pair.lambda1.arg());
        let expected = (r - 1.0 / r).powi(2) * th.sin().powi(2);
        let s2 = q.rho - q.tau * q.tau - 2.0;
        if s2 <= 0.0 {
            return Err(format!("rho - tau^2 - 2 = {s2:e} not positive"));
        }
        Ok((s2 - expected).abs() / q.scale())
    })
}

// ----------------------------------------------------------------- classify

pub fn power_coherence(cfg: &CheckConfig) -> CheckResult {
    run("power coherence", 0.0, cfg, &mut |i, _| {
        let p = mixed_sample(cfg.seed, i);
        let v1 = classify(&p, cfg.tol).map_err(|e| e.to_string())?.verdict.verdict();
        let v2 = classify(&(p * p), cfg.tol).map_err(|e| format!("square: {e}"))?.verdict.verdict();
        let ok = match v1 {
            Verdict::Loxodromic => v2 == Verdict::Loxodromic,
            Verdict::Elliptic => matches!(v2, Verdict::Elliptic | Verdict::Identity | Verdict::MinusIdentity),
            _ => true,
        };
        Ok(pass_fail(ok))
    })
}

pub fn taxonomy_region_coherence(cfg: &CheckConfig) -> CheckResult {
    run("case tags vs regions", 0.0, cfg, &mut |i, _| {
        let r = classify(&mixed_sample(cfg.seed, i), cfg.tol).map_err(|e| e.to_string())?;
        if matches!(r.verdict, IsometryClass::Identity | IsometryClass::MinusIdentity) {
            return Ok(0.0);
        }
        let ok = match r.eigenvalues.case_tag {
            CaseTag::II | CaseTag::IV | CaseTag::VI => {
                matches!(r.region, Region::R1Interior | Region::R1LineBoundary)
            }
            CaseTag::I | CaseTag::V => {
                matches!(r.region, Region::ParabolaArc | Region::TangencyPoint)
            }
            CaseTag::III | CaseTag::VII => {
                matches!(r.region, Region::ParabolaOuter | Region::R2Interior)
            }
        };
        Ok(pass_fail(ok))
    })
}

pub fn elliptic_tau_bound(cfg: &CheckConfig) -> CheckResult {
    run("elliptic trace bound", 0.0, cfg, &mut |i, _| {
        let r = classify(&mixed_sample(cfg.seed, i), cfg.tol).map_err(|e| e.to_string())?;
        Ok(pass_fail(r.verdict.verdict() != Verdict::Elliptic || r.tau.abs() <= 2.0 + cfg.tol.eps))
    })
}

pub fn fixed_point_agreement(cfg: &CheckConfig) -> CheckResult {
    run("region vs eigen-case vs fixed points", 0.0, cfg, &mut |i, _| {
        let r = classify(&mixed_sample(cfg.seed, i), cfg.tol).map_err(|e| e.to_string())?;
        Ok(pass_fail(r.is_consistent()))
    })
}

// ------------------------------------------------------------------- action

pub fn ball_preservation(cfg: &CheckConfig) -> CheckResult {
    run("ball preservation", 1e-9, cfg, &mut |i, rng| {
        let p = mixed_sample(cfg.seed, i);
        let boundary = i % 2 == 1;
        let x = random_ball_point(rng, boundary);
        let y = mobius_apply(&p, x, cfg.tol).map_err(|e| e.to_string())?;
        let n = p.max_norm();
        if boundary {
            Ok((y.norm() - 1.0).abs() / (1.0 + n * n))
        } else if y.norm() < 1.0 {
            Ok(0.0)
        } else {
            Err(format!("|y| = {} for |x| = {}", y.norm(), x.norm()))
        }
    })
}

pub fn group_action(cfg: &CheckConfig) -> CheckResult {
    run("Möbius group action", 1e-8, cfg, &mut |i, rng| {
        let p = mixed_sample(cfg.seed, i);
        let q = mixed_sample(cfg.seed ^ 0xac, i);
        let x = random_ball_point(rng, false);
        let tol = cfg.tol;
        let lhs = mobius_apply(&(p * q), x, tol).map_err(|e| e.to_string())?;
        let rhs =
            mobius_apply(&p, mobius_apply(&q, x, tol).map_err(|e| e.to_string())?, tol).map_err(|e| e.to_string())?;
        let s = (1.0 + p.max_norm().powi(2)) * (1.0 + q.max_norm().powi(2));
        Ok((lhs - rhs).norm() / s)
    })
}

pub fn fixed_point_residual(cfg: &CheckConfig) -> CheckResult {
    run("fixed point residual", 1e-8, cfg, &mut |i, _| {
        let p = mixed_sample(cfg.seed, i);
        let set = match fixed_points(&p, cfg.tol) {
            Err(crate::Error::PlusMinusIdentity) => return Ok(0.0),
            r => r.map_err(|e| e.to_string())?,
        };
        let n = p.max_norm();
        let mut worst: f64 = 0.0;
        for fp in &set.points {
            if let Some(x) = fp.x {
                let y = mobius_apply(&p, x, cfg.tol).map_err(|e| e.to_string())?;
                worst = worst.max((y - x).norm() / (1.0 + n * n));
            }
        }
        Ok(worst)
    })
}

pub fn eigenvector_form_relations(cfg: &CheckConfig) -> CheckResult {
    run("eigenvector isotropy and orthogonality", 1e-8, cfg, &mut |i, _| {
        let p = mixed_sample(cfg.seed, i);
        let r = classify(&p, cfg.tol).map_err(|e| e.to_string())?;
        let pts = &r.fixed_points.points;
        let unit_norm = |v: &HVector| v.euclidean_norm_sqr().sqrt();
        match r.eigenvalues.case_tag {
            CaseTag::III | CaseTag::VII => Ok(pts
                .iter()
                .map(|fp| herm_form(&fp.projective, &fp.projective).norm() / unit_norm(&fp.projective).powi(2))
                .fold(0.0, f64::max)),
            CaseTag::II | CaseTag::IV | CaseTag::VI => {
                if pts.len() != 2 {
                    return Err(format!("{} eigenlines", pts.len()));
                }
                let (a, b) = (&pts[0].projective, &pts[1].projective);
                Ok(herm_form(a, b).norm() / (unit_norm(a) * unit_norm(b)))
            }
            _ => Ok(0.0),
        }
    })
}

/// Sp(1,1) element mapping `0` to the ball point `x0`.
pub fn translate_from_origin(x0: Quaternion) -> QMatrix2 {
    let s = (1.0 - x0.norm_sqr()).sqrt();
    QMatrix2::new(Quaternion::real(1.0 / s), x0 / s, x0.conj() / s, Quaternion::real(1.0 / s))
}

pub fn elliptic_rotation_planes(cfg: &CheckConfig) -> CheckResult {
    run("elliptic invariant surfaces", 1e-8, cfg, &mut |i, rng| {
        let p = mixed_sample(cfg.seed, i);
        let r = classify(&p, cfg.tol).map_err(|e| e.to_string())?;
        if r.verdict.verdict() != Verdict::Elliptic {
            return Ok(0.0);
        }
        let x0 = r
            .fixed_points
            .points
            .iter()
            .find(|f| f.location == Location::Interior)
            .and_then(|f| f.x)
            .ok_or("no interior fixed point")?;
        // move the fixed point to 0, then rotate both diagonal entries into C
        let g = translate_from_origin(x0);
        let centred = sp11_inverse(&g, cfg.tol).map_err(|e| e.to_string())? * p * g;
        let (k1, k2) = (complexifier(centred.a), complexifier(centred.d));
        let k = QMatrix2::diag(k1, k2);
        let normal = sp11_inverse(&k, cfg.tol).map_err(|e| e.to_string())? * centred * k;
        let n = p.max_norm().powi(2);
        let off = normal.b.norm().max(normal.c.norm()) / (1.0 + n);
        let u = Quaternion::new(gauss(rng), gauss(rng), 0.0, 0.0) * 0.3;
        let v = Quaternion::new(0.0, 0.0, gauss(rng), gauss(rng)) * 0.3;
        let fu = mobius_apply(&normal, u, cfg.tol).map_err(|e| e.to_string())?;
        let fv = mobius_apply(&normal, v, cfg.tol).map_err(|e| e.to_string())?;
        let leak_u = fu.y.abs().max(fu.z.abs());
        let leak_v = fv.w.abs().max(fv.x.abs());
        // the rotation angles must match the reported normal form
        if let IsometryClass::Elliptic { alpha, beta, .. } = r.verdict {
            let (ua, _) = u.complex_decompose();
            let (fa, _) = fu.complex_decompose();
            let (_, vb) = v.complex_decompose();
            let (_, fb) = fv.complex_decompose();
            let da = principal_angle((fa / ua).arg() - alpha).abs();
            let db = principal_angle((fb / vb).arg() - beta).abs();
            if da.max(db) > 1e-6 {
                return Err(format!("angles off by {da:e}, {db:e}"));
            }
        }
        Ok(off.max(leak_u).max(leak_v) / (1.0 + n))
    })
}

// -------------------------------------------------------------------- suite

/// Every check, in presentation order.
pub fn all_checks() -> Vec<fn(&CheckConfig) -> CheckResult> {
    vec![
        quaternion_multiplicativity,
        quaternion_conjugation,
        quaternion_similarity,
        chi_homomorphism,
        chi_det_nonnegative,
        chi_det_one,
        char_poly_agreement,
        palindromic_symmetry,
        resultant_identity,
        resultant_roots_equivalence,
        form_preservation,
        group_closure,
        orthogonal_complement_sign,
        oracle_agreement,
        invariant_reconstruction,
        conjugation_invariance,
        inverse_invariance,
        case_vii_identity,
        power_coherence,
        taxonomy_region_coherence,
        elliptic_tau_bound,
        fixed_point_agreement,
        ball_preservation,
        group_action,
        fixed_point_residual,
        eigenvector_form_relations,
        elliptic_rotation_planes,
    ]
}

pub fn run_all(cfg: &CheckConfig) -> Vec<CheckResult> {
    all_checks().iter().map(|f| f(cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let cfg = CheckConfig { trials: 40, ..CheckConfig::default() };
        for r in run_all(&cfg) {
            assert!(r.passed(), "{}: {:?} (worst {:e})", r.name, r.first_failure, r.worst);
        }
    }

    #[test]
    fn unattainable_threshold_fails() {
        let cfg = CheckConfig { trials: 20, threshold: Some(1e-30), ..CheckConfig::default() };
        assert!(run_all(&cfg).iter().any(|r| !r.passed()));
    }

    #[test]
    fn complexifier_rotates_into_c() {
        let q = Quaternion::new(0.3, -0.2, 0.5, 0.7);
        let p = complexifier(q);
        let c = p.conj() * q * p;
        assert!(c.y.abs() < 1e-14 && c.z.abs() < 1e-14 && c.x > 0.0);
        let q = Quaternion::new(0.1, -1.0, 0.0, 0.0);
        let c = complexifier(q).conj() * q * complexifier(q);
        assert!(c.y.abs() < 1e-14 && c.z.abs() < 1e-14 && c.x > 0.0);
    }
}
