//! Substantial right eigenvalues.
//!
//! The roots of the characteristic quartic come in the pattern
//! `{l1, conj(l1), l2, conj(l2)}`, closed under `l -> 1 / conj(l)`. The two
//! substantial eigenvalues are the representatives with non-negative
//! imaginary part. They are computed twice: in closed form from `(tau, rho)`
//! and from the numerical roots.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::classify::{region_of, Region};
use crate::error::{Error, Result};
use crate::quaternion::Complex;
use crate::representation::{cluster_roots, quartic_roots, QuarticCoeffs};
use crate::tolerance::Tolerance;

/// Below this `cos(theta)` the modulus is recovered from `rho` alone.
const SMALL_COS: f64 = 1e-4;

/// Relative distance within which two roots are taken as conjugates.
const PAIRING_REL: f64 = 1e-6;

/// The seven mutually exclusive eigenvalue configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    /// `l1 = l2 = +-1`.
    I,
    /// `l1 = 1, l2 = -1`.
    II,
    /// `l1 = r, l2 = 1/r`, real, `|r| != 1`.
    III,
    /// `l1 = +-1, l2 = e^{i theta}`, non-real.
    IV,
    /// `l1 = l2 = e^{i theta}`, non-real.
    V,
    /// `l1 = e^{i theta1} != l2 = e^{i theta2}`, both non-real.
    VI,
    /// `l1 = r e^{i theta}, l2 = r^{-1} e^{i theta}`, non-real, `r != 1`.
    VII,
}

impl CaseTag {
    pub const ALL: [Self; 7] = [Self::I, Self::II, Self::III, Self::IV, Self::V, Self::VI, Self::VII];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::I => "i",
            Self::II => "ii",
            Self::III => "iii",
            Self::IV => "iv",
            Self::V => "v",
            Self::VI => "vi",
            Self::VII => "vii",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The two substantial eigenvalues with their case tag.
///
/// Each eigenvalue is real or has positive imaginary part. When the moduli
/// differ `|lambda1| > |lambda2|`; otherwise `Re lambda1 >= Re lambda2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubstantialPair {
    pub lambda1: Complex,
    pub lambda2: Complex,
    pub case_tag: CaseTag,
}

impl SubstantialPair {
    /// Normalizes, orders and tags two eigenvalue representatives.
    pub fn new(l1: Complex, l2: Complex, tol: Tolerance) -> Self {
        let thr = tol.taxonomy();
        let norm = |l: Complex| {
            if l.im.abs() <= thr * l.norm() {
                Complex::new(l.re, 0.0)
            } else {
                Complex::new(l.re, l.im.abs())
            }
        };
        let (mut l1, mut l2) = (norm(l1), norm(l2));
        let (m1, m2) = (l1.norm(), l2.norm());
        let swap = if (m1 - m2).abs() > thr * m1.max(m2).max(1.0) { m2 > m1 } else { l2.re > l1.re };
        if swap {
            std::mem::swap(&mut l1, &mut l2);
        }
        let mut pair = Self { lambda1: l1, lambda2: l2, case_tag: CaseTag::I };
        pair.case_tag = classify_case(&pair, tol);
        pair
    }

    pub fn as_array(&self) -> [Complex; 2] {
        [self.lambda1, self.lambda2]
    }

    /// `(tau, rho) = (Re(l1 + l2), |l1|^2 + |l2|^2 + 4 Re l1 Re l2)`.
    pub fn invariants(&self) -> QuarticCoeffs {
        let (l1, l2) = (self.lambda1, self.lambda2);
        QuarticCoeffs::new(l1.re + l2.re, l1.norm_sqr() + l2.norm_sqr() + 4.0 * l1.re * l2.re)
    }

    /// All four roots `{l1, conj l1, l2, conj l2}`.
    pub fn roots(&self) -> [Complex; 4] {
        [self.lambda1, self.lambda1.conj(), self.lambda2, self.lambda2.conj()]
    }

    /// Largest eigenvalue deviation from `other`, each measured relative to
    /// `max(1, |lambda|)`, over both matchings.
    pub fn deviation(&self, other: &Self) -> f64 {
        let d = |a: Complex, b: Complex| (a - b).norm() / a.norm().max(b.norm()).max(1.0);
        let straight = d(self.lambda1, other.lambda1).max(d(self.lambda2, other.lambda2));
        let crossed = d(self.lambda1, other.lambda2).max(d(self.lambda2, other.lambda1));
        straight.min(crossed)
    }
}

/// Tags a normalized pair, resolving near-ties toward the degenerate case.
pub fn classify_case(pair: &SubstantialPair, tol: Tolerance) -> CaseTag {
    let thr = tol.taxonomy();
    let (l1, l2) = (pair.lambda1, pair.lambda2);
    let scale = l1.norm().max(l2.norm()).max(1.0);
    let real = |l: Complex| l.im.abs() <= thr * l.norm();
    let unit = |l: Complex| (l.norm() - 1.0).abs() <= thr;
    let equal = (l1 - l2).norm() <= thr * scale;
    match (unit(l1) && unit(l2), real(l1), real(l2)) {
        (true, true, true) if equal => CaseTag::I,
        (true, true, true) => CaseTag::II,
        (true, true, false) | (true, false, true) => CaseTag::IV,
        (true, false, false) if equal => CaseTag::V,
        (true, false, false) => CaseTag::VI,
        (false, true, true) => CaseTag::III,
        (false, _, _) => CaseTag::VII,
    }
}

fn unit_from_cos(c: f64) -> Complex {
    let c = c.clamp(-1.0, 1.0);
    Complex::new(c, ((1.0 - c) * (1.0 + c)).sqrt())
}

/// Unit eigenvalue from its cosine, snapped to `±1` within `band`.
fn unit_from_cos_snapped(c: f64, band: f64) -> Complex {
    let c = if 1.0 - c.abs() <= band { c.signum() } else { c };
    unit_from_cos(c)
}

/// Closed-form eigenvalues for a known region.
pub fn closed_form_in_region(coeffs: &QuarticCoeffs, region: Region, tol: Tolerance) -> Result<SubstantialPair> {
    let (tau, rho) = (coeffs.tau, coeffs.rho);
    let sign = if tau < 0.0 { -1.0 } else { 1.0 };
    let band = tol.eps * coeffs.scale();
    match region {
        Region::Unrealizable => Err(Error::UnrealizableInvariants { tau, rho }),
        Region::TangencyPoint => {
            let l = Complex::new(sign, 0.0);
            Ok(SubstantialPair::new(l, l, tol))
        }
        Region::R1LineBoundary => {
            let (c1, c2) = if tau >= 0.0 { (1.0, tau - 1.0) } else { (tau + 1.0, -1.0) };
            Ok(SubstantialPair::new(unit_from_cos_snapped(c1, band), unit_from_cos_snapped(c2, band), tol))
        }
        Region::R1Interior | Region::ParabolaArc => {
            let d = if region == Region::ParabolaArc { 0.0 } else { (tau * tau + 2.0 - rho).max(0.0) };
            let s = d.sqrt();
            let (c1, c2) = ((tau + s) / 2.0, (tau - s) / 2.0);
            Ok(SubstantialPair::new(unit_from_cos_snapped(c1, band), unit_from_cos_snapped(c2, band), tol))
        }
        Region::ParabolaOuter | Region::R2Interior => {
            let a = rho + 2.0;
            let root_disc = (a * a - 16.0 * tau * tau).max(0.0).sqrt();
            let c = if region == Region::ParabolaOuter {
                1.0
            } else {
                // cos^2 = (a - sqrt(disc)) / 8, rewritten without cancellation
                (2.0 * tau * tau / (a + root_disc)).sqrt().min(1.0)
            };
            let r = if region == Region::ParabolaOuter {
                let t = tau.abs();
                (t + ((t - 2.0) * (t + 2.0)).max(0.0).sqrt()) / 2.0
            } else if c < SMALL_COS {
                let m = rho - 4.0 * c * c;
                ((m + (m * m - 4.0).max(0.0).sqrt()) / 2.0).sqrt()
            } else {
                let inner = tau * tau * (1.0 - 8.0 / (a + root_disc)).max(0.0);
                (tau.abs() + inner.sqrt()) / (2.0 * c)
            };
            let phase = unit_from_cos(sign * c);
            let phase = if region == Region::ParabolaOuter { Complex::new(sign, 0.0) } else { phase };
            Ok(SubstantialPair::new(phase * r, phase / r, tol))
        }
    }
}

/// Substantial eigenvalues from the closed-form expressions in `(tau, rho)`.
pub fn eigenvalues_closed_form(coeffs: &QuarticCoeffs, tol: Tolerance) -> Result<SubstantialPair> {
    closed_form_in_region(coeffs, region_of(coeffs, tol), tol)
}

/// Substantial eigenvalues from the numerical roots of the quartic.
pub fn eigenvalues_oracle(coeffs: &QuarticCoeffs, tol: Tolerance) -> Result<SubstantialPair> {
    let roots = quartic_roots(coeffs)?;
    let clusters = cluster_roots(coeffs, &roots, tol);
    let thr = tol.taxonomy();
    let mut reps: Vec<Complex> = Vec::with_capacity(2);
    let mut matched = vec![false; clusters.len()];
    for (i, cl) in clusters.iter().enumerate() {
        let z = cl.center;
        if z.im.abs() <= thr * z.norm() {
            // a real eigenvalue of chi(P) has even multiplicity
            if cl.multiplicity % 2 != 0 {
                return Err(Error::ConjugatePairingFailed);
            }
            reps.extend(std::iter::repeat_n(Complex::new(z.re, 0.0), cl.multiplicity / 2));
            matched[i] = true;
        }
    }
    for i in 0..clusters.len() {
        if matched[i] || clusters[i].center.im < 0.0 {
            continue;
        }
        let z = clusters[i].center;
        let partner = (0..clusters.len())
            .filter(|&j| !matched[j] && j != i && clusters[j].multiplicity == clusters[i].multiplicity)
            .filter(|&j| (clusters[j].center - z.conj()).norm() <= PAIRING_REL * z.norm().max(1.0))
            .min_by(|&a, &b| {
                let da = (clusters[a].center - z.conj()).norm();
                let db = (clusters[b].center - z.conj()).norm();
                da.total_cmp(&db)
            })
            .ok_or(Error::ConjugatePairingFailed)?;
        matched[i] = true;
        matched[partner] = true;
        let rep = (z + clusters[partner].center.conj()) / 2.0;
        reps.extend(std::iter::repeat_n(rep, clusters[i].multiplicity));
    }
    if reps.len() != 2 || matched.iter().any(|m| !m) {
        return Err(Error::ConjugatePairingFailed);
    }
    Ok(SubstantialPair::new(reps[0], reps[1], tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn close(a: Complex, b: Complex, eps: f64) -> bool {
        (a - b).norm() <= eps
    }

    fn both(q: QuarticCoeffs) -> (SubstantialPair, SubstantialPair) {
        let tol = Tolerance::default();
        (eigenvalues_closed_form(&q, tol).unwrap(), eigenvalues_oracle(&q, tol).unwrap())
    }

    #[test]
    fn closed_form_examples() {
        let (p, o) = both(QuarticCoeffs::new(0.0, 2.0));
        assert!(close(p.lambda1, c(0.0, 1.0), 1e-12) && close(p.lambda2, c(0.0, 1.0), 1e-12));
        assert_eq!(p.case_tag, CaseTag::V);
        assert_eq!(o.case_tag, CaseTag::V);

        let (p, o) = both(QuarticCoeffs::new(2.0, 6.0));
        assert_eq!((p.lambda1, p.lambda2), (c(1.0, 0.0), c(1.0, 0.0)));
        assert_eq!(p.case_tag, CaseTag::I);
        assert_eq!(o.case_tag, CaseTag::I);

        let ch = 1f64.cosh();
        let (p, o) = both(QuarticCoeffs::new(2.0 * ch, 4.0 * ch * ch + 2.0));
        assert!(close(p.lambda1, c(E, 0.0), 1e-12) && close(p.lambda2, c(1.0 / E, 0.0), 1e-12));
        assert_eq!(p.case_tag, CaseTag::III);
        assert!(p.deviation(&o) < 1e-10);

        let (p, o) = both(QuarticCoeffs::new(0.0, 4.25));
        assert!(close(p.lambda1, c(0.0, 2.0), 1e-12) && close(p.lambda2, c(0.0, 0.5), 1e-12));
        assert_eq!(p.case_tag, CaseTag::VII);
        assert!(p.deviation(&o) < 1e-10);
    }

    #[test]
    fn tau_near_zero_loxodromic_uses_rho() {
        // f(2i) = f(i/2) = 0 at (0, 4.25)
        let q = QuarticCoeffs::new(0.0, 4.25);
        assert!(q.eval(c(0.0, 2.0)).norm() < 1e-12);
        assert!(q.eval(c(0.0, 0.5)).norm() < 1e-12);
        // a tiny tau exercises the small-cosine path
        let (r, th) = (2.0f64, PI / 2.0 - 1e-7);
        let l1 = Complex::from_polar(r, th);
        let l2 = Complex::from_polar(1.0 / r, th);
        let q = SubstantialPair::new(l1, l2, Tolerance::default()).invariants();
        let (p, o) = both(q);
        assert!(p.deviation(&o) < 1e-10);
        assert!(close(p.lambda1, l1, 1e-10));
    }

    #[test]
    fn oracle_examples() {
        let tol = Tolerance::default();
        let o = eigenvalues_oracle(&QuarticCoeffs::new(0.0, -2.0), tol).unwrap();
        assert!(close(o.lambda1, c(1.0, 0.0), 1e-12) && close(o.lambda2, c(-1.0, 0.0), 1e-12));
        assert_eq!(o.case_tag, CaseTag::II);

        let h = (PI / 3.0).cos();
        let o = eigenvalues_oracle(&QuarticCoeffs::new(1.0 + h, 2.0 + 4.0 * h), tol).unwrap();
        assert!(close(o.lambda1, c(1.0, 0.0), 1e-12));
        assert!(close(o.lambda2, Complex::from_polar(1.0, PI / 3.0), 1e-12));
        assert_eq!(o.case_tag, CaseTag::IV);

        let (a, b) = ((PI / 3.0).cos(), (PI / 4.0).cos());
        let o = eigenvalues_oracle(&QuarticCoeffs::new(a + b, 2.0 + 4.0 * a * b), tol).unwrap();
        assert!(close(o.lambda1, Complex::from_polar(1.0, PI / 4.0), 1e-12));
        assert!(close(o.lambda2, Complex::from_polar(1.0, PI / 3.0), 1e-12));
        assert_eq!(o.case_tag, CaseTag::VI);
    }

    #[test]
    fn case_examples() {
        let tol = Tolerance::default();
        let tag = |a, b| SubstantialPair::new(a, b, tol).case_tag;
        assert_eq!(tag(c(1.0, 0.0), c(-1.0, 0.0)), CaseTag::II);
        let l = Complex::from_polar(1.0, PI / 5.0);
        assert_eq!(tag(l, l), CaseTag::V);
        let th = PI / 7.0;
        assert_eq!(tag(Complex::from_polar(3.0, th), Complex::from_polar(1.0 / 3.0, th)), CaseTag::VII);
        assert_eq!(tag(c(-1.0, 0.0), c(-1.0, 0.0)), CaseTag::I);
        assert_eq!(tag(c(-3.0, 0.0), c(-1.0 / 3.0, 0.0)), CaseTag::III);
    }

    #[test]
    fn unrealizable_is_refused() {
        let err = eigenvalues_closed_form(&QuarticCoeffs::new(3.0, 10.5), Tolerance::default()).unwrap_err();
        assert!(err.to_string().starts_with("unrealizable invariants"));
    }

    #[test]
    fn ordering_convention() {
        let tol = Tolerance::default();
        let p = SubstantialPair::new(c(0.5, 0.0), c(2.0, 0.0), tol);
        assert_eq!(p.lambda1, c(2.0, 0.0));
        let p = SubstantialPair::new(Complex::from_polar(1.0, 2.0), Complex::from_polar(1.0, 1.0), tol);
        assert!(p.lambda1.re >= p.lambda2.re);
        let p = SubstantialPair::new(c(0.3, -0.4), c(0.0, 1.0), tol);
        assert!(p.lambda1.im >= 0.0 && p.lambda2.im >= 0.0);
    }
}
