//! Library-wide numerical tolerance.
//!
//! Every threshold in the crate is derived from a single base `eps`. The
//! derived thresholds keep their relative spacing when `eps` is overridden.

/// Default base tolerance.
pub const DEFAULT_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Base tolerance for region boundaries, case tags and root multiplicities.
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps: DEFAULT_EPS }
    }
}

impl Tolerance {
    pub const fn new(eps: f64) -> Self {
        Self { eps }
    }

    /// `|a - b| <= eps * (1 + scale)`.
    #[inline]
    pub fn close(&self, a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= self.eps * (1.0 + scale.abs())
    }

    /// Relative tolerance for Sp(1,1) membership.
    #[inline]
    pub fn membership(&self) -> f64 {
        10.0 * self.eps
    }

    /// Agreement between independent routes (eigenvalues, fixed-point
    /// residuals, normal-form reconstruction).
    #[inline]
    pub fn agreement(&self) -> f64 {
        100.0 * self.eps
    }

    /// Relative rank threshold for null-space extraction.
    #[inline]
    pub fn rank(&self) -> f64 {
        100.0 * self.eps
    }

    /// Equality, reality and unit-modulus tests on eigenvalues.
    #[inline]
    pub fn taxonomy(&self) -> f64 {
        1000.0 * self.eps
    }

    /// Sign classification of computed eigenvectors.
    #[inline]
    pub fn eigenvector(&self) -> f64 {
        1000.0 * self.eps
    }
}
