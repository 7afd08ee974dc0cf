use std::ops::{Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::quaternion::{Complex, Quaternion};
use crate::sp11::HVector;

/// A quaternionic 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QMatrix2 {
    pub a: Quaternion,
    pub b: Quaternion,
    pub c: Quaternion,
    pub d: Quaternion,
}

impl QMatrix2 {
    pub const fn new(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        Self { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Self::diag(Quaternion::ONE, Quaternion::ONE)
    }

    pub const fn diag(a: Quaternion, d: Quaternion) -> Self {
        Self::new(a, Quaternion::ZERO, Quaternion::ZERO, d)
    }

    /// The hyperbolic boost `[[cosh t, sinh t], [sinh t, cosh t]]`.
    pub fn boost(t: f64) -> Self {
        let (ch, sh) = (Quaternion::real(t.cosh()), Quaternion::real(t.sinh()));
        Self::new(ch, sh, sh, ch)
    }

    /// Conjugate transpose `P*`.
    pub fn adjoint(&self) -> Self {
        Self::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    /// Left scalar multiplication `q P`.
    pub fn left_scale(&self, q: Quaternion) -> Self {
        Self::new(q * self.a, q * self.b, q * self.c, q * self.d)
    }

    pub fn mul_vec(&self, v: &HVector) -> HVector {
        HVector::new(self.a * v.x1 + self.b * v.x2, self.c * v.x1 + self.d * v.x2)
    }

    pub fn entries(&self) -> [Quaternion; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Largest entry norm.
    pub fn max_norm(&self) -> f64 {
        self.entries().iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation `max |P_ij - Q_ij|`.
    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).max_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|q| q.is_finite())
    }
}

impl Mul for QMatrix2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Sub for QMatrix2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for QMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }
}

/// A complex 4x4 matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix4(pub [[Complex; 4]; 4]);

impl CMatrix4 {
    pub const fn new(rows: [[Complex; 4]; 4]) -> Self {
        Self(rows)
    }

    pub fn zeros() -> Self {
        Self([[Complex::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            m.0[i][i] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// `self - lambda I`.
    pub fn shifted(&self, lambda: Complex) -> Self {
        let mut m = *self;
        for i in 0..4 {
            m.0[i][i] -= lambda;
        }
        m
    }

    pub fn mul_vec(&self, v: &[Complex; 4]) -> [Complex; 4] {
        let mut out = [Complex::new(0.0, 0.0); 4];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    /// Determinant by partial-pivot LU.
    pub fn det(&self) -> Complex {
        let mut m = self.0;
        let mut det = Complex::new(1.0, 0.0);
        for k in 0..4 {
            let p = (k..4).max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm())).unwrap_or(k);
            if m[p][k].norm() == 0.0 {
                return Complex::new(0.0, 0.0);
            }
            if p != k {
                m.swap(p, k);
                det = -det;
            }
            det *= m[k][k];
            for i in k + 1..4 {
                let f = m[i][k] / m[k][k];
                for j in k..4 {
                    let t = m[k][j];
                    m[i][j] -= f * t;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let mut m = self.0;
        let mut inv = Self::identity().0;
        for k in 0..4 {
            let p = (k..4).max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm()))?;
            if m[p][k].norm() == 0.0 {
                return None;
            }
            m.swap(p, k);
            inv.swap(p, k);
            let piv = m[k][k];
            for j in 0..4 {
                m[k][j] /= piv;
                inv[k][j] /= piv;
            }
            for i in 0..4 {
                if i != k {
                    let f = m[i][k];
                    for j in 0..4 {
                        let (mk, ik) = (m[k][j], inv[k][j]);
                        m[i][j] -= f * mk;
                        inv[i][j] -= f * ik;
                    }
                }
            }
        }
        Some(Self(inv))
    }

    /// Characteristic polynomial `det(tI - M)` by Faddeev-LeVerrier,
    /// coefficients highest degree first.
    pub fn char_poly(&self) -> [Complex; 5] {
        let mut coeffs = [Complex::new(0.0, 0.0); 5];
        coeffs[0] = Complex::new(1.0, 0.0);
        let mut mk = Self::zeros();
        for k in 1..=4 {
            let mut next = *self * mk;
            for i in 0..4 {
                next.0[i][i] += coeffs[k - 1];
            }
            mk = next;
            coeffs[k] = -(*self * mk).trace() / k as f64;
        }
        coeffs
    }

    /// Basis of the null space of `self`, by complete-pivot elimination.
    ///
    /// Pivots below `rank_tol` count as zero.
    pub fn null_space(&self, rank_tol: f64) -> Vec<[Complex; 4]> {
        self.eliminate(rank_tol, 4)
    }

    /// Approximate null space of known dimension `dim`: the complete-pivoting
    /// elimination stops after `4 - dim` steps.
    pub fn null_space_of_dim(&self, dim: usize) -> Vec<[Complex; 4]> {
        self.eliminate(0.0, 4 - dim.min(4))
    }

    fn eliminate(&self, rank_tol: f64, max_rank: usize) -> Vec<[Complex; 4]> {
        let zero = Complex::new(0.0, 0.0);
        let mut m = self.0;
        let mut cols = [0usize, 1, 2, 3];
        let mut rank = 0;
        for k in 0..max_rank {
            let mut best = (k, k, 0.0);
            for i in k..4 {
                for j in k..4 {
                    let v = m[i][j].norm();
                    if v > best.2 {
                        best = (i, j, v);
                    }
                }
            }
            if best.2 <= rank_tol {
                break;
            }
            m.swap(k, best.0);
            for row in m.iter_mut() {
                row.swap(k, best.1);
            }
            cols.swap(k, best.1);
            for i in k + 1..4 {
                let f = m[i][k] / m[k][k];
                for j in k..4 {
                    let t = m[k][j];
                    m[i][j] -= f * t;
                }
            }
            rank = k + 1;
        }
        let mut basis = Vec::with_capacity(4 - rank);
        for free in rank..4 {
            // Back-substitute with the free permuted variable set to one.
            let mut y = [zero; 4];
            y[free] = Complex::new(1.0, 0.0);
            for k in (0..rank).rev() {
                let s: Complex = (k + 1..4).map(|j| m[k][j] * y[j]).sum();
                y[k] = -s / m[k][k];
            }
            let mut v = [zero; 4];
            for (k, &c) in cols.iter().enumerate() {
                v[c] = y[k];
            }
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            basis.push(v.map(|z| z / n));
        }
        basis
    }
}

impl Mul for CMatrix4 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (0..4).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        m
    }
}
