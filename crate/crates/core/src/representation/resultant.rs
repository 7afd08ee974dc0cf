//! Sylvester resultant of the characteristic quartic and its derivative.

use super::QuarticCoeffs;

use crate::tolerance::Tolerance;

/// The 7x7 Sylvester matrix of `f` and `f'`: three shifted rows of `f`
/// followed by four shifted rows of `f' = 4t^3 - 6 tau t^2 + 2 rho t - 2 tau`.
pub fn sylvester_matrix(coeffs: &QuarticCoeffs) -> [[f64; 7]; 7] {
    let f = coeffs.coefficients();
    let (tau, rho) = (coeffs.tau, coeffs.rho);
    let df = [4.0, -6.0 * tau, 2.0 * rho, -2.0 * tau];
    let mut m = [[0.0; 7]; 7];
    for r in 0..3 {
        m[r][r..r + 5].copy_from_slice(&f);
    }
    for r in 0..4 {
        m[3 + r][r..r + 4].copy_from_slice(&df);
    }
    m
}

fn det7(mut m: [[f64; 7]; 7]) -> f64 {
    let mut det = 1.0;
    for k in 0..7 {
        let p = (k..7).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap_or(k);
        if m[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..7 {
            let f = m[i][k] / m[k][k];
            for j in k..7 {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det
}

/// `Res(f, f')` as the determinant of [`sylvester_matrix`].
pub fn sylvester_resultant(coeffs: &QuarticCoeffs) -> f64 {
    det7(sylvester_matrix(coeffs))
}

/// `(rho + 4 tau + 2, rho - 4 tau + 2, rho - tau^2 - 2)`.
pub fn discriminant_factors(coeffs: &QuarticCoeffs) -> (f64, f64, f64) {
    let (tau, rho) = (coeffs.tau, coeffs.rho);
    (rho + 4.0 * tau + 2.0, rho - 4.0 * tau + 2.0, rho - tau * tau - 2.0)
}

/// Last pivot of complete-pivoting elimination, a proxy for the smallest
/// singular value.
fn last_pivot(mut m: [[f64; 7]; 7]) -> f64 {
    for k in 0..7 {
        let mut best = (k, k, 0.0);
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                if v.abs() > best.2 {
                    best = (i, j, v.abs());
                }
            }
        }
        if best.2 == 0.0 {
            return 0.0;
        }
        m.swap(k, best.0);
        for row in m.iter_mut() {
            row.swap(k, best.1);
        }
        for i in k + 1..7 {
            let f = m[i][k] / m[k][k];
            for j in k..7 {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    m[6][6].abs()
}

/// Whether the Sylvester matrix is numerically singular at `eps`, i.e.
/// whether `f` has a repeated root: the last complete-pivoting pivot is at
/// most `eps * max |entry|`.
pub fn resultant_vanishes(coeffs: &QuarticCoeffs, tol: Tolerance) -> bool {
    let m = sylvester_matrix(coeffs);
    let norm = m.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
    last_pivot(m) <= tol.eps * norm
}
