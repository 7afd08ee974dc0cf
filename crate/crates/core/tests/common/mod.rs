#![allow(dead_code)]

use proptest::prelude::*;
use quatisom_core::{QMatrix2, Quaternion, SamplerKind};

pub fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
    Quaternion::new(w, x, y, z)
}

/// The parabolic example with invariants `(0, 2)`.
pub fn example_matrix() -> QMatrix2 {
    QMatrix2::new(q(1.0, 1.0, 0.0, 0.0), q(1.0, 0.0, 0.0, 0.0), q(-1.0, 0.0, 0.0, 0.0), q(-1.0, 1.0, 0.0, 0.0))
}

/// A parabolic element with invariants `(2, 6)`.
pub fn tangency_matrix() -> QMatrix2 {
    QMatrix2::new(q(1.0, 1.0, 0.0, 0.0), q(0.0, -1.0, 0.0, 0.0), q(0.0, 1.0, 0.0, 0.0), q(1.0, -1.0, 0.0, 0.0))
}

pub fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(Quaternion::from)
}

pub fn matrix() -> impl Strategy<Value = QMatrix2> {
    (quaternion(), quaternion(), quaternion(), quaternion()).prop_map(|(a, b, c, d)| QMatrix2::new(a, b, c, d))
}

pub fn kind() -> impl Strategy<Value = SamplerKind> {
    prop::sample::select(SamplerKind::ALL.to_vec())
}

/// `(seed, index, kind)` addressing one group sample.
pub fn sample_address() -> impl Strategy<Value = (u64, u64, SamplerKind)> {
    (any::<u64>(), 0..1_000_000u64, kind())
}
