//! Möbius action on the ball model and fixed points.
//!
//! A non-zero vector `X = (X1, X2)` with `<X, X> <= 0` projects to the ball
//! point `x = X1 X2^{-1}`, `|x| <= 1`. A right eigenvector `P X = X lambda`
//! projects to a fixed point of `x -> (a x + b)(c x + d)^{-1}`.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::classify::{IsometryClass, Verdict};
use crate::error::{Error, Result};
use crate::quaternion::{Complex, Quaternion};
use crate::representation::{chi, invariants_unchecked, CMatrix4, QMatrix2};
use crate::sp11::{herm_form, is_sp11, vector_sign_rel, HVector, VectorSign};
use crate::spectrum::{eigenvalues_oracle, SubstantialPair};
use crate::tolerance::Tolerance;

const INVERSE_ITERATIONS: usize = 3;
const DEFECTIVE_OVERLAP: f64 = 1e-3;

/// A point `x` of the closed unit ball in `H`.
pub type BallPoint = Quaternion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// A projective fixed point: an eigenline `X` with `P X = X lambda`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPoint {
    pub location: Location,
    /// Ball coordinate, absent for exterior points.
    pub x: Option<BallPoint>,
    pub projective: HVector,
    pub eigenvalue: Complex,
    /// Whether a whole complex line of eigenvectors shares `eigenvalue`.
    pub degenerate: bool,
}

impl Serialize for FixedPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FixedPoint", 3)?;
        st.serialize_field("location", &self.location)?;
        st.serialize_field("x", &self.x)?;
        st.serialize_field("projective", &[self.projective.x1, self.projective.x2])?;
        st.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FixedPointSet {
    pub points: Vec<FixedPoint>,
}

impl FixedPointSet {
    pub fn count(&self, location: Location) -> usize {
        self.points.iter().filter(|p| p.location == location).count()
    }

    pub fn interior(&self) -> impl Iterator<Item = &FixedPoint> {
        self.points.iter().filter(|p| p.location == Location::Interior)
    }

    pub fn boundary(&self) -> impl Iterator<Item = &FixedPoint> {
        self.points.iter().filter(|p| p.location == Location::Boundary)
    }

    /// Eigenvalue carried by the first point at `location`.
    pub fn eigenvalue_at(&self, location: Location) -> Option<Complex> {
        self.points.iter().find(|p| p.location == location).map(|p| p.eigenvalue)
    }
}

/// `(a x + b)(c x + d)^{-1}`.
pub fn mobius_apply(p: &QMatrix2, x: BallPoint, tol: Tolerance) -> Result<BallPoint> {
    let den = p.c * x + p.d;
    if !(den.norm() > tol.eps) {
        return Err(Error::DenominatorVanishes);
    }
    (p.a * x + p.b).right_div(den)
}

/// Quaternionic vector whose complex representation has first column `xi`.
fn from_complex_column(xi: &[Complex; 4]) -> HVector {
    HVector::new(
        Quaternion::from_complex_pair(xi[0], -xi[2].conj()),
        Quaternion::from_complex_pair(xi[1], -xi[3].conj()),
    )
}

fn normalized(v: HVector) -> HVector {
    let n = v.euclidean_norm_sqr().sqrt();
    HVector::new(v.x1 / n, v.x2 / n)
}

/// Complex part `a` of a quaternion `a + b j`.
fn complex_part(q: Quaternion) -> Complex {
    q.complex_decompose().0
}

/// Eigenvectors of a 2x2 Hermitian matrix `[[g11, g12], [conj g12, g22]]`,
/// as (smaller, larger) eigenvalue pairs.
fn hermitian_eigen(g11: f64, g12: Complex, g22: f64) -> [(f64, [Complex; 2]); 2] {
    let mean = (g11 + g22) / 2.0;
    let half = (g11 - g22) / 2.0;
    let rad = half.hypot(g12.norm());
    let vec_for = |mu: f64| {
        // rows (g11 - mu, g12) and (conj g12, g22 - mu); take the better one
        let r1 = [Complex::new(-g12.re, -g12.im), Complex::new(g11 - mu, 0.0)];
        let r2 = [Complex::new(g22 - mu, 0.0), -g12.conj()];
        let n1 = r1[0].norm_sqr() + r1[1].norm_sqr();
        let n2 = r2[0].norm_sqr() + r2[1].norm_sqr();
        let (v, n) = if n1 >= n2 { (r1, n1) } else { (r2, n2) };
        if n == 0.0 {
            [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]
        } else {
            let n = n.sqrt();
            [v[0] / n, v[1] / n]
        }
    };
    let (lo, hi) = (mean - rad, mean + rad);
    if rad == 0.0 {
        let e = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
        let f = [Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)];
        return [(lo, e), (hi, f)];
    }
    [(lo, vec_for(lo)), (hi, vec_for(hi))]
}

/// `|P v - v q|` for the least-squares quaternion `q`, with `|v| = 1`.
fn line_residual(p: &QMatrix2, v: &HVector) -> f64 {
    let pv = p.mul_vec(v);
    let q = v.x1.conj() * pv.x1 + v.x2.conj() * pv.x2;
    (pv - v.right_scale(q)).euclidean_norm_sqr().sqrt()
}

const START: [Complex; 4] =
    [Complex::new(1.0, 0.0), Complex::new(0.5, 0.3), Complex::new(-0.7, 0.1), Complex::new(0.2, -0.4)];

/// A vector in the invariant subspace of the eigenvalues of `m` nearest
/// `lambda`, by inverse iteration from `start`.
fn inverse_iteration(m: &CMatrix4, lambda: Complex, start: [Complex; 4]) -> Option<[Complex; 4]> {
    let inv = m.shifted(lambda).inverse()?;
    let mut v = start;
    for _ in 0..INVERSE_ITERATIONS {
        let w = inv.mul_vec(&v);
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(n.is_finite() && n > 0.0) {
            return None;
        }
        v = w.map(|z| z / n);
    }
    Some(v)
}

/// The eigenvector of a simple eigenvalue class: the approximate null
/// vector of known dimension, polished by inverse iteration.
fn simple_class_vector(p: &QMatrix2, m: &CMatrix4, lambda: Complex) -> Result<HVector> {
    let dim = if lambda.im == 0.0 { 2 } else { 1 };
    let best = m
        .shifted(lambda)
        .null_space_of_dim(dim)
        .into_iter()
        .map(|xi| (xi, line_residual(p, &normalized(from_complex_column(&xi)))))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::EigenvectorExtractionFailed(format!("empty null space for {lambda}")))?;
    let v = from_complex_column(&best.0);
    Ok(match inverse_iteration(m, lambda, best.0).map(|xi| from_complex_column(&xi)) {
        Some(w) if line_residual(p, &normalized(w)) < best.1 => w,
        _ => v,
    })
}

type CVec = [Complex; 4];

fn cdot(a: &CVec, b: &CVec) -> Complex {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn cnormalize(v: CVec) -> Option<CVec> {
    let n = cdot(&v, &v).re.sqrt();
    (n.is_finite() && n > 0.0).then(|| v.map(|z| z / n))
}

/// Orthonormal basis of the two-dimensional invariant subspace of the
/// eigenvalues of `m` nearest `lambda`, by block inverse iteration.
fn cluster_basis(m: &CMatrix4, lambda: Complex) -> Option<[CVec; 2]> {
    let inv = m.shifted(lambda).inverse()?;
    let z = Complex::new(0.0, 0.0);
    let mut basis = [START, [z, Complex::new(1.0, 0.0), Complex::new(0.3, -0.2), Complex::new(0.6, 0.5)]];
    for _ in 0..INVERSE_ITERATIONS {
        let u = cnormalize(inv.mul_vec(&basis[0]))?;
        let w = inv.mul_vec(&basis[1]);
        let c = cdot(&u, &w);
        let mut w2 = w;
        for (wi, ui) in w2.iter_mut().zip(&u) {
            *wi -= c * ui;
        }
        basis = [u, cnormalize(w2)?];
    }
    Some(basis)
}

/// Eigenvectors of a 2x2 complex matrix, or one vector when it is nearly
/// defective.
fn eigen_2x2(b: [[Complex; 2]; 2]) -> Vec<[Complex; 2]> {
    let half_tr = (b[0][0] + b[1][1]) / 2.0;
    let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    let root = (half_tr * half_tr - det).sqrt();
    let vec_for = |mu: Complex| {
        let r1 = [b[0][1], mu - b[0][0]];
        let r2 = [mu - b[1][1], b[1][0]];
        let n1 = r1[0].norm_sqr() + r1[1].norm_sqr();
        let n2 = r2[0].norm_sqr() + r2[1].norm_sqr();
        let (v, n) = if n1 >= n2 { (r1, n1) } else { (r2, n2) };
        if n == 0.0 {
            None
        } else {
            let n = n.sqrt();
            Some([v[0] / n, v[1] / n])
        }
    };
    let vs: Vec<_> = [half_tr + root, half_tr - root].into_iter().filter_map(vec_for).collect();
    match vs.as_slice() {
        [v1, v2] => {
            let overlap = (v1[0].conj() * v2[0] + v1[1].conj() * v2[1]).norm();
            if overlap > 1.0 - DEFECTIVE_OVERLAP {
                vec![*v1]
            } else {
                vs
            }
        }
        _ => vs,
    }
}

/// Fixed-point vectors of a single non-real class whose two eigenvalues of
/// `chi(P)` are distinct but merged within the band.
fn merged_class_vectors(m: &CMatrix4, lambda: Complex) -> Result<Vec<HVector>> {
    let fail = || Error::EigenvectorExtractionFailed(format!("no invariant subspace near {lambda}"));
    let basis = cluster_basis(m, lambda).ok_or_else(fail)?;
    let shifted = m.shifted(lambda);
    let images = [shifted.mul_vec(&basis[0]), shifted.mul_vec(&basis[1])];
    let b = [
        [cdot(&basis[0], &images[0]), cdot(&basis[0], &images[1])],
        [cdot(&basis[1], &images[0]), cdot(&basis[1], &images[1])],
    ];
    let vectors = eigen_2x2(b);
    if vectors.is_empty() {
        return Err(fail());
    }
    Ok(vectors
        .iter()
        .map(|z| {
            let v: CVec = std::array::from_fn(|k| basis[0][k] * z[0] + basis[1][k] * z[1]);
            from_complex_column(&v)
        })
        .collect())
}

fn point_from(p: &QMatrix2, v: HVector, lambda: Complex, degenerate: bool, tol: Tolerance) -> Result<FixedPoint> {
    let v = normalized(v);
    let sign = vector_sign_rel(&v, tol.eigenvector())?;
    let residual = line_residual(p, &v);
    if residual > tol.eigenvector() * (1.0 + p.max_norm()) {
        return Err(Error::EigenvectorExtractionFailed(format!(
            "eigenvector residual {residual:e} for eigenvalue {lambda}"
        )));
    }
    let (location, x) = match sign {
        VectorSign::Positive => (Location::Exterior, None),
        s => {
            let x = v.x1.right_div(v.x2)?;
            let loc = if s == VectorSign::Negative { Location::Interior } else { Location::Boundary };
            (loc, Some(x))
        }
    };
    Ok(FixedPoint { location, x, projective: v, eigenvalue: lambda, degenerate })
}

/// Fixed points of `x -> (a x + b)(c x + d)^{-1}` from eigenvectors of `chi(P)`.
pub fn fixed_points(p: &QMatrix2, tol: Tolerance) -> Result<FixedPointSet> {
    if !is_sp11(p, tol) {
        return Err(Error::NotInSp11);
    }
    if is_plus_minus_identity(p, tol) {
        return Err(Error::PlusMinusIdentity);
    }
    let pair = eigenvalues_oracle(&invariants_unchecked(p), tol)?;
    fixed_points_for(p, &pair, tol)
}

pub(crate) fn is_plus_minus_identity(p: &QMatrix2, tol: Tolerance) -> bool {
    let thr = tol.membership() * (1.0 + p.max_norm());
    p.distance(&QMatrix2::identity()) <= thr || p.distance(&-QMatrix2::identity()) <= thr
}

/// [`fixed_points`] with known substantial eigenvalues.
pub fn fixed_points_for(p: &QMatrix2, pair: &SubstantialPair, tol: Tolerance) -> Result<FixedPointSet> {
    let m: CMatrix4 = chi(p);
    let rank_tol = tol.rank() * m.max_norm();
    let thr = tol.taxonomy();
    let mut classes = vec![pair.lambda1];
    if (pair.lambda1 - pair.lambda2).norm() > thr * pair.lambda1.norm().max(1.0) {
        classes.push(pair.lambda2);
    }

    let mut points = Vec::new();
    if classes.len() == 2 {
        for lambda in classes {
            let v = simple_class_vector(p, &m, lambda)?;
            points.push(point_from(p, v, lambda, false, tol)?);
        }
    } else {
        let lambda = pair.lambda1;
        let null = m.shifted(lambda).null_space(rank_tol);
        match (lambda.im == 0.0, null.len()) {
            (true, 2) | (false, 1) => {
                let best = null
                    .iter()
                    .map(from_complex_column)
                    .max_by(|a, b| a.euclidean_norm_sqr().total_cmp(&b.euclidean_norm_sqr()))
                    .ok_or_else(|| Error::EigenvectorExtractionFailed("empty null space".into()))?;
                points.push(point_from(p, best, lambda, false, tol)?);
            }
            (false, 2) => {
                // A complex line of eigenvectors: split it by the form.
                let (x1, x2) = (from_complex_column(&null[0]), from_complex_column(&null[1]));
                let g11 = herm_form(&x1, &x1).re();
                let g22 = herm_form(&x2, &x2).re();
                let g12 = complex_part(herm_form(&x1, &x2));
                for (_, z) in hermitian_eigen(g11, g12, g22) {
                    let v = x1.right_scale(Quaternion::from(z[0])) + x2.right_scale(Quaternion::from(z[1]));
                    points.push(point_from(p, v, lambda, true, tol)?);
                }
            }
            (true, 0) => {
                // eigenvalue snapped within the band: use its cluster
                let v = inverse_iteration(&m, lambda, START)
                    .ok_or_else(|| Error::EigenvectorExtractionFailed(format!("singular shift at {lambda}")))?;
                points.push(point_from(p, from_complex_column(&v), lambda, false, tol)?);
            }
            (false, 0) => {
                let vectors = merged_class_vectors(&m, lambda)?;
                let merged = vectors.len() > 1;
                for v in vectors {
                    points.push(point_from(p, v, lambda, merged, tol)?);
                }
            }
            (_, n) => {
                return Err(Error::EigenvectorExtractionFailed(format!(
                    "null space of dimension {n} for eigenvalue {lambda}"
                )))
            }
        }
    }

    let res_tol = tol.agreement() * (1.0 + p.max_norm() * p.max_norm());
    for fp in &points {
        if let Some(x) = fp.x {
            let residual = (mobius_apply(p, x, tol)? - x).norm();
            if residual > res_tol {
                return Err(Error::FixedPointResidual { residual });
            }
        }
    }
    Ok(FixedPointSet { points })
}

/// Elliptic, parabolic or loxodromic from the fixed points in the closed ball.
pub fn classify_by_fixed_points(p: &QMatrix2, tol: Tolerance) -> Result<Verdict> {
    verdict_from_fixed_points(&fixed_points(p, tol)?)
}

pub fn verdict_from_fixed_points(set: &FixedPointSet) -> Result<Verdict> {
    let interior = set.count(Location::Interior);
    let boundary = set.count(Location::Boundary);
    match (interior, boundary) {
        (i, 0) if i > 0 => Ok(Verdict::Elliptic),
        (0, 1) => Ok(Verdict::Parabolic),
        (0, 2) => Ok(Verdict::Loxodromic),
        _ => Err(Error::TrichotomyViolation { interior, boundary }),
    }
}

/// The model map of a normal form.
///
/// Elliptic maps act on ball coordinates `x = u + v j` by
/// `u -> e^{i alpha} u`, `v -> e^{i beta} v`. Parabolic and loxodromic maps
/// act on Siegel coordinates `xi` (domain `Re xi < 0`, ideal point at
/// infinity) by `xi -> lambda xi lambda^{-1} + lambda^{-1}` and
/// `xi -> r^2 e^{i theta} xi e^{-i theta}`.
pub fn normal_form_action(class: &IsometryClass, x: Quaternion) -> Result<Quaternion> {
    match *class {
        IsometryClass::Identity | IsometryClass::MinusIdentity => Ok(x),
        IsometryClass::Elliptic { alpha, beta, .. } => {
            if !(alpha.is_finite() && beta.is_finite()) {
                return Err(Error::ParameterMismatch);
            }
            let (u, v) = x.complex_decompose();
            Ok(Quaternion::from_complex_pair(Complex::from_polar(1.0, alpha) * u, Complex::from_polar(1.0, beta) * v))
        }
        IsometryClass::Parabolic { lambda } => {
            if !((lambda.norm() - 1.0).abs() <= 1e-6) {
                return Err(Error::ParameterMismatch);
            }
            let l = Quaternion::from(lambda);
            let li = l.inv()?;
            Ok(l * x * li + li)
        }
        IsometryClass::Loxodromic { r, theta } => {
            if !(r.is_finite() && r > 0.0 && theta.is_finite()) {
                return Err(Error::ParameterMismatch);
            }
            let e = Quaternion::from(Complex::from_polar(1.0, theta));
            Ok(e * x * e.conj() * (r * r))
        }
    }
}
