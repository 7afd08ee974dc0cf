//! Seeded sampling of Sp(1,1).
//!
//! Every sample is drawn from its own ChaCha8 stream: the seed selects the
//! key and the sample index selects the stream, so samples can be drawn in
//! any order or in parallel with identical results.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use super::inverse_unchecked;
use crate::quaternion::Quaternion;
use crate::representation::QMatrix2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    /// `K1 A(t) K2` with `t ~ Exp(1)`.
    #[default]
    Generic,
    /// `K1 K2`: block-diagonal, unit-modulus spectrum.
    Boundary,
    /// Parabolic translations and screws, optionally perturbed by a group
    /// element of order `1e-12` or less, conjugated by a random element.
    NearParabolic,
    /// Exact representatives of the degenerate eigenvalue cases and of the
    /// `tau ~ 0` loxodromics, conjugated by a random element.
    Degenerate,
}

impl SamplerKind {
    pub const ALL: [Self; 4] = [Self::Generic, Self::Boundary, Self::NearParabolic, Self::Degenerate];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Generic => "generic",
            Self::Boundary => "boundary",
            Self::NearParabolic => "near-parabolic",
            Self::Degenerate => "degenerate",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplerKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown sampler kind `{s}`"))
    }
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform unit quaternion (normalized 4-dimensional Gaussian).
pub fn unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let g: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let q = Quaternion::from(g);
        let n = q.norm();
        if n > 1e-6 {
            return q / n;
        }
    }
}

/// Uniform unit pure-imaginary quaternion.
pub fn unit_imaginary<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let g: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let q = Quaternion::new(0.0, g[0], g[1], g[2]);
        let n = q.norm();
        if n > 1e-6 {
            return q / n;
        }
    }
}

fn random_diag<R: Rng + ?Sized>(rng: &mut R) -> QMatrix2 {
    QMatrix2::diag(unit_quaternion(rng), unit_quaternion(rng))
}

fn kak<R: Rng + ?Sized>(rng: &mut R, t: f64) -> QMatrix2 {
    random_diag(rng) * QMatrix2::boost(t) * random_diag(rng)
}

/// `[[1 + mu s, -mu s], [mu s, 1 - mu s]]`, a parabolic translation fixing
/// the boundary point `x = 1`.
fn translation(mu: Quaternion, s: f64) -> QMatrix2 {
    let ms = mu * s;
    QMatrix2::new(Quaternion::ONE + ms, -ms, ms, Quaternion::ONE - ms)
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

fn conjugate<R: Rng + ?Sized>(rng: &mut R, p: QMatrix2) -> QMatrix2 {
    let t = rng.random_range(0.0..1.5);
    let q = kak(rng, t);
    q * p * inverse_unchecked(&q)
}

/// `diag(u, v) A(t)` with rotation angles and `t` of order `eta`, `eta`
/// log-uniform in `[1e-15, 1e-12]`.
fn near_identity<R: Rng + ?Sized>(rng: &mut R) -> QMatrix2 {
    let eta = log_uniform(rng, 1e-15, 1e-12);
    let g: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let (a, b, t) = (eta * g[0], eta * g[1], eta * g[2]);
    let u = Quaternion::exp_imaginary(unit_imaginary(rng), a);
    let v = Quaternion::exp_imaginary(unit_imaginary(rng), b);
    QMatrix2::diag(u, v) * QMatrix2::boost(t)
}

fn near_parabolic<R: Rng + ?Sized>(rng: &mut R) -> QMatrix2 {
    let mu = unit_imaginary(rng);
    let s = random_sign(rng) * log_uniform(rng, 0.1, 3.0);
    let n = translation(mu, s);
    let p = match rng.random_range(0..4) {
        // Heisenberg translation, tangency point
        0 => n.left_scale(Quaternion::real(random_sign(rng))),
        // screw parabolic on the open arc
        1 => n.left_scale(Quaternion::exp_imaginary(mu, rng.random_range(0.05..PI - 0.05))),
        // Heisenberg translation times an element within `eta` of the identity
        2 => n.left_scale(Quaternion::real(random_sign(rng))) * near_identity(rng),
        // screw parabolic times an element within `eta` of the identity
        _ => n.left_scale(Quaternion::exp_imaginary(mu, rng.random_range(0.05..PI - 0.05))) * near_identity(rng),
    };
    conjugate(rng, p)
}

fn degenerate<R: Rng + ?Sized>(rng: &mut R) -> QMatrix2 {
    let mu = unit_imaginary(rng);
    let t = rng.sample::<f64, _>(Exp1) + 0.05;
    let p = match rng.random_range(0..7) {
        // eigenvalues {1, -1}
        0 => QMatrix2::diag(Quaternion::ONE, -Quaternion::ONE).left_scale(Quaternion::real(random_sign(rng))),
        // one real, one non-real unit eigenvalue
        1 => {
            let r = Quaternion::real(random_sign(rng));
            let l = Quaternion::exp_imaginary(mu, rng.random_range(0.05..PI - 0.05));
            if rng.random_bool(0.5) {
                QMatrix2::diag(r, l)
            } else {
                QMatrix2::diag(l, r)
            }
        }
        // a complex rotation: scalar unit quaternion
        2 => {
            let l = Quaternion::exp_imaginary(mu, rng.random_range(0.05..PI - 0.05));
            QMatrix2::diag(l, l)
        }
        // real loxodromic, either sign
        3 => QMatrix2::boost(t).left_scale(Quaternion::real(random_sign(rng))),
        // loxodromic with cos(theta) = 0
        4 => QMatrix2::boost(t).left_scale(mu),
        // loxodromic with cos(theta) close to 0
        5 => {
            let theta = FRAC_PI_2 + random_sign(rng) * log_uniform(rng, 1e-7, 1e-3);
            QMatrix2::boost(t).left_scale(Quaternion::exp_imaginary(mu, theta))
        }
        // loxodromic screw with arbitrary angle
        _ => QMatrix2::boost(t).left_scale(Quaternion::exp_imaginary(mu, rng.random_range(0.0..TAU))),
    };
    conjugate(rng, p)
}

/// Sample number `index` of the stream keyed by `seed`.
pub fn sample_indexed(seed: u64, index: u64, kind: SamplerKind) -> QMatrix2 {
    let mut rng = rng_for(seed, index);
    match kind {
        SamplerKind::Generic => {
            let t = rng.sample::<f64, _>(Exp1);
            kak(&mut rng, t)
        }
        SamplerKind::Boundary => random_diag(&mut rng) * random_diag(&mut rng),
        SamplerKind::NearParabolic => near_parabolic(&mut rng),
        SamplerKind::Degenerate => degenerate(&mut rng),
    }
}

/// The first sample of the stream keyed by `seed`.
pub fn sample_sp11(seed: u64, kind: SamplerKind) -> QMatrix2 {
    sample_indexed(seed, 0, kind)
}
