//! The Hermitian form of signature (1,1) on `H^2` and its isometry group.
//!
//! `<X, Y> = X* J Y` with `J = diag(1, -1)`. A matrix `P` lies in Sp(1,1)
//! when `P* J P = J`.

mod sample;

pub use sample::{sample_indexed, sample_sp11, unit_imaginary, unit_quaternion, SamplerKind};

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::representation::QMatrix2;
use crate::tolerance::Tolerance;

/// A column vector `(x1, x2)` in `H^{1,1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HVector {
    pub x1: Quaternion,
    pub x2: Quaternion,
}

impl HVector {
    pub const fn new(x1: Quaternion, x2: Quaternion) -> Self {
        Self { x1, x2 }
    }

    /// Right scalar multiplication `X q`.
    pub fn right_scale(&self, q: Quaternion) -> Self {
        Self::new(self.x1 * q, self.x2 * q)
    }

    /// `|x1|^2 + |x2|^2`.
    pub fn euclidean_norm_sqr(&self) -> f64 {
        self.x1.norm_sqr() + self.x2.norm_sqr()
    }

    pub fn is_zero(&self) -> bool {
        self.euclidean_norm_sqr() == 0.0
    }
}

impl Add for HVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl Sub for HVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl Mul<HVector> for QMatrix2 {
    type Output = HVector;
    fn mul(self, v: HVector) -> HVector {
        self.mul_vec(&v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorSign {
    Negative,
    Isotropic,
    Positive,
}

impl fmt::Display for VectorSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Negative => "negative",
            Self::Isotropic => "isotropic",
            Self::Positive => "positive",
        })
    }
}

/// `<X, Y> = conj(x1) y1 - conj(x2) y2`.
pub fn herm_form(x: &HVector, y: &HVector) -> Quaternion {
    x.x1.conj() * y.x1 - x.x2.conj() * y.x2
}

/// Sign of `<X, X>`; values within `eps (|x1|^2 + |x2|^2)` are isotropic.
pub fn vector_sign(x: &HVector, tol: Tolerance) -> Result<VectorSign> {
    vector_sign_rel(x, tol.eps)
}

/// [`vector_sign`] with an explicit relative threshold.
pub fn vector_sign_rel(x: &HVector, rel: f64) -> Result<VectorSign> {
    let n = x.euclidean_norm_sqr();
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    let q = x.x1.norm_sqr() - x.x2.norm_sqr();
    Ok(if q.abs() <= rel * n {
        VectorSign::Isotropic
    } else if q < 0.0 {
        VectorSign::Negative
    } else {
        VectorSign::Positive
    })
}

/// Largest entry of `P* J P - J`.
pub fn membership_defect(p: &QMatrix2) -> f64 {
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    let e11 = a.norm_sqr() - c.norm_sqr() - 1.0;
    let e12 = (a.conj() * b - c.conj() * d).norm();
    let e22 = b.norm_sqr() - d.norm_sqr() + 1.0;
    e11.abs().max(e12).max(e22.abs())
}

/// `P* J P = J` to `membership * (1 + max |P_ij|^2)`.
pub fn is_sp11(p: &QMatrix2, tol: Tolerance) -> bool {
    if !p.is_finite() {
        return false;
    }
    let m = p.max_norm();
    membership_defect(p) <= tol.membership() * (1.0 + m * m)
}

/// `P^{-1} = J P* J = [[ā, -c̄], [-b̄, d̄]]`.
pub fn sp11_inverse(p: &QMatrix2, tol: Tolerance) -> Result<QMatrix2> {
    if !is_sp11(p, tol) {
        return Err(Error::NotInSp11);
    }
    Ok(inverse_unchecked(p))
}

pub(crate) fn inverse_unchecked(p: &QMatrix2) -> QMatrix2 {
    QMatrix2::new(p.a.conj(), -p.c.conj(), -p.b.conj(), p.d.conj())
}
