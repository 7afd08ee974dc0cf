//! Polynomial root finding and multiple-root detection.
//!
//! `aberth_roots` is the primary solver (simultaneous Aberth-Ehrlich
//! iteration); `companion_roots` runs shifted QR on the companion matrix and
//! serves as fallback and as an independent check.

use std::f64::consts::TAU;

use super::QuarticCoeffs;
use crate::error::{Error, Result};
use crate::quaternion::Complex;
use crate::tolerance::Tolerance;

const MAX_ITER: usize = 200;

/// Candidate radius (relative) inside which roots may belong to one cluster.
const CLUSTER_RADIUS: f64 = 1e-2;
const MAX_REFINE: usize = 50;

/// Horner evaluation, coefficients highest degree first.
pub fn poly_eval(coeffs: &[Complex], z: Complex) -> Complex {
    coeffs.iter().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn eval_with_derivative(coeffs: &[Complex], z: Complex) -> (Complex, Complex) {
    let mut p = Complex::new(0.0, 0.0);
    let mut dp = Complex::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Running-error bound for Horner evaluation at `z`.
fn eval_error_bound(coeffs: &[Complex], z: Complex) -> f64 {
    let r = z.norm();
    let s = coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm());
    4.0 * f64::EPSILON * s
}

fn monic(coeffs: &[Complex]) -> Vec<Complex> {
    let lead = coeffs[0];
    coeffs.iter().map(|c| c / lead).collect()
}

fn strip_leading_zeros(coeffs: &[Complex]) -> &[Complex] {
    let first = coeffs.iter().position(|c| c.norm() != 0.0).unwrap_or(coeffs.len());
    &coeffs[first..]
}

/// All roots by Aberth-Ehrlich iteration from a ring of starting points.
///
/// Fails with the best residual if any root misses the residual bound
/// `1e-9 * sum |c_i| |z|^i` after the iteration cap.
pub fn aberth_roots(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    let coeffs = strip_leading_zeros(coeffs);
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = monic(coeffs);

    // Starting ring: radius from the coefficient bound, rotated so that the
    // points are not symmetric about the real axis.
    let radius = (1..=n).map(|k| a[k].norm().powf(1.0 / k as f64)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex> = (0..n).map(|k| Complex::from_polar(radius, TAU * k as f64 / n as f64 + 0.7)).collect();

    for _ in 0..MAX_ITER {
        let mut done = true;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(&a, z[k]);
            if p.norm() <= eval_error_bound(&a, z[k]) {
                continue;
            }
            let ratio = if dp.norm() == 0.0 { Complex::new(1e-3 * (1.0 + z[k].norm()), 0.0) } else { p / dp };
            let repulsion: Complex = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex::new(0.0, 0.0)
                    } else {
                        1.0 / d
                    }
                })
                .sum();
            let denom = Complex::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            z[k] -= step;
            if step.norm() > 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                done = false;
            }
        }
        if done {
            break;
        }
    }

    check_residuals(&a, &z)?;
    Ok(z)
}

fn check_residuals(a: &[Complex], roots: &[Complex]) -> Result<()> {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for &r in roots {
        let res = poly_eval(a, r).norm();
        let bound = 1e-9 * a.iter().fold(0.0, |acc, c| acc * r.norm() + c.norm());
        if !res.is_finite() || res > bound {
            ok = false;
        }
        worst = worst.max(res / bound.max(f64::MIN_POSITIVE));
    }
    if ok {
        Ok(())
    } else {
        Err(Error::NonConvergence { best_residual: worst })
    }
}

/// All roots as eigenvalues of the companion matrix, by shifted QR.
pub fn companion_roots(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    let coeffs = strip_leading_zeros(coeffs);
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = monic(coeffs);
    let zero = Complex::new(0.0, 0.0);
    let mut h = vec![vec![zero; n]; n];
    for j in 0..n {
        h[0][j] = -a[j + 1];
    }
    for i in 1..n {
        h[i][i - 1] = Complex::new(1.0, 0.0);
    }
    let eig = hessenberg_eigenvalues(h)?;
    check_residuals(&a, &eig)?;
    Ok(eig)
}

fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex>>) -> Result<Vec<Complex>> {
    let n = h.len();
    let mut eig = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            eig.push(h[0][0]);
            break;
        }
        // Deflation search.
        let mut lo = 0;
        for l in (1..=hi).rev() {
            let s = h[l][l].norm() + h[l - 1][l - 1].norm();
            if h[l][l - 1].norm() <= f64::EPSILON * s.max(f64::MIN_POSITIVE) {
                h[l][l - 1] = Complex::new(0.0, 0.0);
                lo = l;
                break;
            }
        }
        if lo == hi {
            eig.push(h[hi][hi]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n {
            return Err(Error::NonConvergence { best_residual: f64::INFINITY });
        }

        let (a, b, c, d) = (h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi]);
        // Wilkinson shift: eigenvalue of the trailing 2x2 block closer to d.
        let mut shift = {
            let half = (a - d) / 2.0;
            let disc = (half * half + b * c).sqrt();
            let m = (a + d) / 2.0;
            let (e1, e2) = (m + disc, m - disc);
            if (e1 - d).norm() < (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };
        if iter.is_multiple_of(11) {
            // exceptional shift
            shift = d + Complex::new(h[hi][hi - 1].norm(), 0.0);
        }

        for i in lo..=hi {
            h[i][i] -= shift;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (x, y) = (h[k][k], h[k + 1][k]);
            let (cs, sn) = givens(x, y);
            for j in k..=hi {
                let (u, v) = (h[k][j], h[k + 1][j]);
                h[k][j] = cs * u + sn * v;
                h[k + 1][j] = -sn.conj() * u + cs * v;
            }
            rots.push((cs, sn));
        }
        for (idx, k) in (lo..hi).enumerate() {
            let (cs, sn) = rots[idx];
            for i in lo..=(k + 2).min(hi) {
                let (u, v) = (h[i][k], h[i][k + 1]);
                h[i][k] = u * cs + v * sn.conj();
                h[i][k + 1] = -u * sn + v * cs;
            }
        }
        for i in lo..=hi {
            h[i][i] += shift;
        }
    }
    Ok(eig)
}

/// Rotation `[[c, s], [-s̄, c]]` with real `c` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex, y: Complex) -> (Complex, Complex) {
    let (ax, ay) = (x.norm(), y.norm());
    if ay == 0.0 {
        return (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
    }
    let r = ax.hypot(ay);
    let phase = x / ax;
    (Complex::new(ax / r, 0.0), phase * y.conj() / r)
}

/// Roots by Aberth iteration, falling back to companion QR.
pub fn poly_roots(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    aberth_roots(coeffs).or_else(|_| companion_roots(coeffs))
}

/// The four roots of `t^4 - 2 tau t^3 + rho t^2 - 2 tau t + 1`.
pub fn quartic_roots(coeffs: &QuarticCoeffs) -> Result<[Complex; 4]> {
    let roots = poly_roots(&coeffs.complex_coefficients())?;
    for r in &roots {
        let bound = 1e-9 * (1.0 + r.norm().powi(4));
        if coeffs.eval(*r).norm() > bound {
            return Err(Error::NonConvergence { best_residual: coeffs.eval(*r).norm() });
        }
    }
    Ok([roots[0], roots[1], roots[2], roots[3]])
}

/// A root of the quartic together with its detected multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub center: Complex,
    pub multiplicity: usize,
}

/// Newton iteration on `f^(k-1)`, of which a k-fold root of `f` is a simple
/// root.
fn refine_center(coeffs: &QuarticCoeffs, m0: Complex, k: usize) -> Complex {
    let j = k - 1;
    let mut m = m0;
    for _ in 0..MAX_REFINE {
        let t = coeffs.taylor(m);
        let next = if j + 1 < 4 { t[j + 1] } else { Complex::new(1.0, 0.0) };
        let d = (j + 1) as f64 * next;
        if d.norm() == 0.0 {
            break;
        }
        let step = t[j] / d;
        m -= step;
        if step.norm() <= f64::EPSILON * m.norm().max(1.0) {
            break;
        }
    }
    m
}

/// Whether `m` is a root of multiplicity at least `k`: the Taylor
/// coefficients `t_j` of orders `0..k` must satisfy
/// `|t_j| <= eps * scale * |m|^(2 - j)`, a test invariant under `m -> 1/m`.
fn is_multiple_root(coeffs: &QuarticCoeffs, m: Complex, k: usize, tol: Tolerance) -> bool {
    let thr = tol.eps * coeffs.scale();
    let t = coeffs.taylor(m);
    let r = m.norm();
    t[..k].iter().enumerate().all(|(j, c)| c.norm() <= thr * r.powi(2 - j as i32))
}

/// Refined center of a candidate cluster, if it is a k-fold root.
fn cluster_center(coeffs: &QuarticCoeffs, zs: &[Complex], tol: Tolerance) -> Option<Complex> {
    let k = zs.len();
    let m0 = mean(zs);
    let m = refine_center(coeffs, m0, k);
    let close = zs.iter().all(|z| near(*z, m));
    (m.is_finite() && close && is_multiple_root(coeffs, m, k, tol)).then_some(m)
}

fn near(a: Complex, b: Complex) -> bool {
    (a - b).norm() <= CLUSTER_RADIUS * a.norm().max(b.norm()).max(1e-300)
}

fn mean(zs: &[Complex]) -> Complex {
    zs.iter().sum::<Complex>() / zs.len() as f64
}

/// Groups numerically split multiple roots.
///
/// A k-fold root of a perturbed polynomial splits into k roots spread by
/// roughly `eps^(1/k)`, far beyond any fixed pairwise threshold. Candidates
/// within a generous radius are therefore merged only when their mean
/// passes the Taylor-coefficient test of [`is_multiple_root`]; the mean of
/// a split cluster is well conditioned.
pub fn cluster_roots(coeffs: &QuarticCoeffs, roots: &[Complex; 4], tol: Tolerance) -> Vec<RootCluster> {
    let all_near = (0..4).all(|i| (i + 1..4).all(|j| near(roots[i], roots[j])));
    if all_near {
        if let Some(m) = cluster_center(coeffs, roots, tol) {
            return vec![RootCluster { center: m, multiplicity: 4 }];
        }
    }

    let thr = tol.eps * coeffs.scale();
    let mut candidates: Vec<(f64, usize, usize, Complex)> = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            if !near(roots[i], roots[j]) {
                continue;
            }
            if let Some(m) = cluster_center(coeffs, &[roots[i], roots[j]], tol) {
                let score = coeffs.eval(m).norm() / (thr * m.norm_sqr());
                candidates.push((score, i, j, m));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut used = [false; 4];
    let mut clusters = Vec::with_capacity(4);
    for (_, i, j, m) in candidates {
        if used[i] || used[j] {
            continue;
        }
        used[i] = true;
        used[j] = true;
        clusters.push(RootCluster { center: m, multiplicity: 2 });
    }
    for (i, r) in roots.iter().enumerate() {
        if !used[i] {
            clusters.push(RootCluster { center: *r, multiplicity: 1 });
        }
    }
    clusters
}

/// Repeated-root detector on the root side.
pub fn has_repeated_root(coeffs: &QuarticCoeffs, tol: Tolerance) -> Result<bool> {
    let roots = quartic_roots(coeffs)?;
    Ok(cluster_roots(coeffs, &roots, tol).iter().any(|c| c.multiplicity > 1))
}
