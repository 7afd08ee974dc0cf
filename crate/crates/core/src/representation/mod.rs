//! The complex representation `chi : M_2(H) -> M_4(C)` and the polynomial
//! machinery built on its characteristic polynomial.
//!
//! Writing every entry of a quaternionic matrix as `a + b j` splits `P` into
//! complex matrices `A + B j`, and
//!
//! ```text
//! chi(P) = [  A     B  ]
//!          [ -B̄    Ā  ]
//! ```
//!
//! For `P` in Sp(1,1) the characteristic polynomial of `chi(P)` is the
//! palindromic quartic `t^4 - 2 tau t^3 + rho t^2 - 2 tau t + 1`.

mod matrix;
mod poly;
mod resultant;

pub use matrix::{CMatrix4, QMatrix2};
pub use poly::{
    aberth_roots, cluster_roots, companion_roots, has_repeated_root, poly_eval, poly_roots, quartic_roots, RootCluster,
};
pub use resultant::{discriminant_factors, resultant_vanishes, sylvester_matrix, sylvester_resultant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Complex;
use crate::sp11::is_sp11;
use crate::tolerance::Tolerance;

/// The trace invariants `(tau, rho)` of an element of Sp(1,1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticCoeffs {
    pub tau: f64,
    pub rho: f64,
}

impl QuarticCoeffs {
    pub const fn new(tau: f64, rho: f64) -> Self {
        Self { tau, rho }
    }

    /// Coefficients of `f`, highest degree first.
    pub fn coefficients(&self) -> [f64; 5] {
        [1.0, -2.0 * self.tau, self.rho, -2.0 * self.tau, 1.0]
    }

    pub fn complex_coefficients(&self) -> [Complex; 5] {
        self.coefficients().map(|c| Complex::new(c, 0.0))
    }

    /// Scale used for every tolerance decision in the `(tau, rho)` plane.
    pub fn scale(&self) -> f64 {
        1.0 + self.tau * self.tau + self.rho.abs()
    }

    pub fn eval(&self, t: Complex) -> Complex {
        poly_eval(&self.complex_coefficients(), t)
    }

    /// Taylor coefficients `f^(j)(m) / j!` for `j = 0..4`.
    pub fn taylor(&self, m: Complex) -> [Complex; 4] {
        let (tau, rho) = (self.tau, self.rho);
        let m2 = m * m;
        let m3 = m2 * m;
        [
            m2 * m2 - 2.0 * tau * m3 + rho * m2 - 2.0 * tau * m + 1.0,
            4.0 * m3 - 6.0 * tau * m2 + 2.0 * rho * m - 2.0 * tau,
            6.0 * m2 - 6.0 * tau * m + rho,
            4.0 * m - 2.0 * tau,
        ]
    }
}

/// The complex representation of a quaternionic 2x2 matrix.
pub fn chi(p: &QMatrix2) -> CMatrix4 {
    let (a0, a1) = p.a.complex_decompose();
    let (b0, b1) = p.b.complex_decompose();
    let (c0, c1) = p.c.complex_decompose();
    let (d0, d1) = p.d.complex_decompose();
    // P = A + B j with A = [[a0, b0], [c0, d0]], B = [[a1, b1], [c1, d1]]
    CMatrix4::new([
        [a0, b0, a1, b1],
        [c0, d0, c1, d1],
        [-a1.conj(), -b1.conj(), a0.conj(), b0.conj()],
        [-c1.conj(), -d1.conj(), c0.conj(), d0.conj()],
    ])
}

/// Inverse of [`chi`] on its image: reads `A` and `B` from the top block row.
pub fn unchi(m: &CMatrix4) -> QMatrix2 {
    use crate::quaternion::Quaternion;
    let e = &m.0;
    QMatrix2::new(
        Quaternion::from_complex_pair(e[0][0], e[0][2]),
        Quaternion::from_complex_pair(e[0][1], e[0][3]),
        Quaternion::from_complex_pair(e[1][0], e[1][2]),
        Quaternion::from_complex_pair(e[1][1], e[1][3]),
    )
}

/// `(tau, rho)` from the closed-form entry formulas. Refuses non-members.
pub fn char_poly_coeffs(p: &QMatrix2, tol: Tolerance) -> Result<QuarticCoeffs> {
    if !is_sp11(p, tol) {
        return Err(Error::NotInSp11);
    }
    Ok(invariants_unchecked(p))
}

/// `tau = Re(a + d)`, `rho = 2 + |c - b̄|^2 + 4 Re(a) Re(d)` without the
/// membership check.
pub fn invariants_unchecked(p: &QMatrix2) -> QuarticCoeffs {
    let tau = p.a.re() + p.d.re();
    let rho = 2.0 + (p.c - p.b.conj()).norm_sqr() + 4.0 * p.a.re() * p.d.re();
    QuarticCoeffs { tau, rho }
}
