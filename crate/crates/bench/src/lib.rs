//! Fixed inputs for the benchmarks.

use quatisom_core::{sample_indexed, QMatrix2, QuarticCoeffs, SamplerKind};

/// `n` samples of each sampler kind, interleaved.
pub fn mixed_batch(seed: u64, n: usize) -> Vec<QMatrix2> {
    (0..n as u64).flat_map(|i| SamplerKind::ALL.map(|k| sample_indexed(seed, i, k))).collect()
}

/// Invariants spread over the realizable part of the `(tau, rho)` plane.
pub fn invariant_grid() -> Vec<QuarticCoeffs> {
    let mut out = Vec::new();
    for i in 0..=20 {
        for j in 0..=20 {
            out.push(QuarticCoeffs::new(-4.0 + 0.4 * i as f64, -6.0 + 1.6 * j as f64));
        }
    }
    out
}
