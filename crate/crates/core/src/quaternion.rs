//! Quaternion arithmetic.
//!
//! Components are stored as `(w, x, y, z)` for `w + x i + y j + z k`. The
//! complex numbers are identified with the real subalgebra spanned by `1, i`,
//! so every quaternion splits uniquely as `a + b j` with `a, b` complex.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar, identified with quaternions whose `j` and `k` parts vanish.
pub type Complex = Complex64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from([w, x, y, z]: [f64; 4]) -> Self {
        Self { w, x, y, z }
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl From<Complex> for Quaternion {
    fn from(c: Complex) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Self::real(r)
    }
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Builds `a + b j`.
    #[inline]
    pub fn from_complex_pair(a: Complex, b: Complex) -> Self {
        Self::new(a.re, a.im, b.re, b.im)
    }

    /// `exp(u * angle)` for a unit pure-imaginary `u`.
    pub fn exp_imaginary(u: Quaternion, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c, s * u.x, s * u.y, s * u.z)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part as a pure quaternion.
    #[inline]
    pub fn im(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    /// `conj(q) / |q|^2`.
    pub fn inv(self) -> Result<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj() / n)
    }

    /// Right division `self * other^{-1}`.
    pub fn right_div(self, other: Self) -> Result<Self> {
        Ok(self * other.inv()?)
    }

    /// `(Re q, |q|)`: two quaternions are similar iff these agree.
    pub fn similarity_invariants(self) -> (f64, f64) {
        (self.w, self.norm())
    }

    /// The representative `Re q + |Im q| i` of the similarity class.
    pub fn canonical_rep(self) -> Complex {
        Complex::new(self.w, self.im().norm())
    }

    /// Unique `(a, b)` with `q = a + b j`.
    #[inline]
    pub fn complex_decompose(self) -> (Complex, Complex) {
        (Complex::new(self.w, self.x), Complex::new(self.y, self.z))
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Complex> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, c: Complex) -> Self {
        self * Quaternion::from(c)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}
