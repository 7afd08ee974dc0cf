//! Elliptic, parabolic and loxodromic classification from `(tau, rho)`.
//!
//! The plane is cut by the line pair `rho = 4|tau| - 2` and the parabola
//! `rho = tau^2 + 2`, which touch at the tangency points `(+-2, 6)`:
//!
//! ```text
//! R1 = { |tau| <= 2, 4|tau| - 2 <= rho <= tau^2 + 2 }   (bounded lens)
//! R2 = { rho >= tau^2 + 2 }
//! ```
//!
//! Inside the lens the map is elliptic, strictly above the parabola it is
//! loxodromic. On the arc `|tau| < 2` of the parabola both elliptic and
//! parabolic maps occur and the entries decide; the tangency points are
//! parabolic; the parabola beyond `|tau| > 2` carries real loxodromics.

use std::f64::consts::PI;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::action::{fixed_points_for, is_plus_minus_identity, verdict_from_fixed_points, FixedPointSet, Location};
use crate::error::{Error, Result};
use crate::quaternion::Complex;
use crate::representation::{chi, invariants_unchecked, QMatrix2, QuarticCoeffs};
use crate::sp11::is_sp11;
use crate::spectrum::{closed_form_in_region, eigenvalues_oracle, CaseTag, SubstantialPair};
use crate::tolerance::Tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    #[serde(rename = "R1_interior")]
    R1Interior,
    #[serde(rename = "R1_line_boundary")]
    R1LineBoundary,
    #[serde(rename = "parabola_arc")]
    ParabolaArc,
    #[serde(rename = "tangency_point")]
    TangencyPoint,
    #[serde(rename = "parabola_outer")]
    ParabolaOuter,
    #[serde(rename = "R2_interior")]
    R2Interior,
    #[serde(rename = "unrealizable")]
    Unrealizable,
}

impl Region {
    pub const ALL: [Self; 7] = [
        Self::R1Interior,
        Self::R1LineBoundary,
        Self::ParabolaArc,
        Self::TangencyPoint,
        Self::ParabolaOuter,
        Self::R2Interior,
        Self::Unrealizable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::R1Interior => "R1_interior",
            Self::R1LineBoundary => "R1_line_boundary",
            Self::ParabolaArc => "parabola_arc",
            Self::TangencyPoint => "tangency_point",
            Self::ParabolaOuter => "parabola_outer",
            Self::R2Interior => "R2_interior",
            Self::Unrealizable => "unrealizable",
        }
    }

    pub fn is_realizable(self) -> bool {
        self != Self::Unrealizable
    }

    /// The verdict a region forces, if any. `None` on the arc, where the
    /// entries decide, and for unrealizable invariants.
    pub fn forced_verdict(self) -> Option<Verdict> {
        match self {
            Self::TangencyPoint => Some(Verdict::Parabolic),
            Self::R1Interior | Self::R1LineBoundary => Some(Verdict::Elliptic),
            Self::ParabolaOuter | Self::R2Interior => Some(Verdict::Loxodromic),
            Self::ParabolaArc | Self::Unrealizable => None,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Region of `(tau, rho)`; boundary bands have half-width `eps * scale`.
pub fn region_of(coeffs: &QuarticCoeffs, tol: Tolerance) -> Region {
    let (tau, rho) = (coeffs.tau, coeffs.rho);
    if !(tau.is_finite() && rho.is_finite()) {
        return Region::Unrealizable;
    }
    let band = tol.eps * coeffs.scale();
    let s1 = rho - (4.0 * tau.abs() - 2.0);
    let s2 = rho - (tau * tau + 2.0);
    if s2.abs() <= band {
        return if (tau.abs() - 2.0).abs() <= band {
            Region::TangencyPoint
        } else if tau.abs() < 2.0 {
            Region::ParabolaArc
        } else {
            Region::ParabolaOuter
        };
    }
    if s2 > 0.0 {
        return Region::R2Interior;
    }
    if s1 >= -band && tau.abs() <= 2.0 + tol.eps {
        return if s1.abs() <= band { Region::R1LineBoundary } else { Region::R1Interior };
    }
    Region::Unrealizable
}

/// `Re a = Re d` and `c = conj(b)`, to `eps (1 + max |P_ij|^2)`.
///
/// On the open parabola arc this holds exactly for the diagonalizable maps.
pub fn structural_diag_test(p: &QMatrix2, tol: Tolerance) -> bool {
    let m = p.max_norm();
    let thr = tol.eps * (1.0 + m * m);
    (p.a.re() - p.d.re()).abs() <= thr && (p.c - p.b.conj()).max_abs() <= thr
}

/// Residual of `chi(P)^2 - 2 Re(lambda) chi(P) + I`, relative to `1 + |chi|^2`.
/// Vanishes iff a map with spectrum `{lambda, conj lambda}` is diagonalizable.
pub fn minimal_polynomial_residual(p: &QMatrix2, lambda: Complex) -> f64 {
    let m = chi(p);
    let mut r = m * m;
    for i in 0..4 {
        for j in 0..4 {
            r.0[i][j] -= m.0[i][j] * (2.0 * lambda.re);
        }
        r.0[i][i] += 1.0;
    }
    let n = m.max_norm();
    r.max_norm() / (1.0 + n * n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Identity,
    MinusIdentity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::MinusIdentity => "minus_identity",
            Self::Elliptic => "elliptic",
            Self::Parabolic => "parabolic",
            Self::Loxodromic => "loxodromic",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict with normal-form parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IsometryClass {
    Identity,
    MinusIdentity,
    /// `x = u + v j -> e^{i alpha} u + e^{i beta} v j` about the interior
    /// fixed point; `lambda1` rides on the positive eigenvector, `lambda2` on
    /// the negative one, and `(alpha, beta) = (arg l1 - arg l2, arg l1 + arg l2)`.
    Elliptic {
        alpha: f64,
        beta: f64,
        lambda1: Complex,
        lambda2: Complex,
    },
    /// `xi -> lambda xi lambda^{-1} + lambda^{-1}`: a Heisenberg translation
    /// for `lambda = +-1`, a screw otherwise.
    Parabolic {
        lambda: Complex,
    },
    /// `xi -> r^2 e^{i theta} xi e^{-i theta}`: a homothety for `theta = 0`
    /// or `pi`, a screw otherwise.
    Loxodromic {
        r: f64,
        theta: f64,
    },
}

impl IsometryClass {
    pub fn verdict(&self) -> Verdict {
        match self {
            Self::Identity => Verdict::Identity,
            Self::MinusIdentity => Verdict::MinusIdentity,
            Self::Elliptic { .. } => Verdict::Elliptic,
            Self::Parabolic { .. } => Verdict::Parabolic,
            Self::Loxodromic { .. } => Verdict::Loxodromic,
        }
    }

    /// Invariants recomputed from the normal-form parameters.
    pub fn invariants(&self) -> QuarticCoeffs {
        let pair = |l1: Complex, l2: Complex| {
            QuarticCoeffs::new(l1.re + l2.re, l1.norm_sqr() + l2.norm_sqr() + 4.0 * l1.re * l2.re)
        };
        let one = Complex::new(1.0, 0.0);
        match *self {
            Self::Identity => pair(one, one),
            Self::MinusIdentity => pair(-one, -one),
            Self::Elliptic { lambda1, lambda2, .. } => pair(lambda1, lambda2),
            Self::Parabolic { lambda } => pair(lambda, lambda),
            Self::Loxodromic { r, theta } => pair(Complex::from_polar(r, theta), Complex::from_polar(1.0 / r, theta)),
        }
    }
}

/// `angle` reduced to `(-pi, pi]`.
pub fn principal_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a - 2.0 * PI
    } else {
        a
    }
}

impl Serialize for IsometryClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Self::Identity | Self::MinusIdentity => s.serialize_struct("NormalForm", 0)?.end(),
            Self::Elliptic { alpha, beta, lambda1, lambda2 } => {
                let mut st = s.serialize_struct("NormalForm", 4)?;
                st.serialize_field("alpha", &alpha)?;
                st.serialize_field("beta", &beta)?;
                st.serialize_field("lambda1", &lambda1)?;
                st.serialize_field("lambda2", &lambda2)?;
                st.end()
            }
            Self::Parabolic { lambda } => {
                let mut st = s.serialize_struct("NormalForm", 2)?;
                let kind = if lambda.im == 0.0 { "translation" } else { "screw" };
                st.serialize_field("kind", kind)?;
                st.serialize_field("lambda", &lambda)?;
                st.end()
            }
            Self::Loxodromic { r, theta } => {
                let mut st = s.serialize_struct("NormalForm", 3)?;
                let kind = if theta == 0.0 || theta == PI { "homothety" } else { "screw" };
                st.serialize_field("kind", kind)?;
                st.serialize_field("r", &r)?;
                st.serialize_field("theta", &theta)?;
                st.end()
            }
        }
    }
}

/// Outcome of one named cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub check: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub verdict: IsometryClass,
    pub tau: f64,
    pub rho: f64,
    pub region: Region,
    pub eigenvalues: SubstantialPair,
    pub diagonalizable: bool,
    pub consistency: Vec<CheckOutcome>,
    /// Fixed points in the closed ball and outside it; empty for `+-I`.
    pub fixed_points: FixedPointSet,
}

impl ClassificationReport {
    pub fn is_consistent(&self) -> bool {
        self.consistency.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.consistency.iter().find(|c| c.check == name).map(|c| c.pass)
    }
}

impl Serialize for ClassificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ClassificationReport", 10)?;
        st.serialize_field("verdict", &self.verdict.verdict())?;
        st.serialize_field("tau", &self.tau)?;
        st.serialize_field("rho", &self.rho)?;
        st.serialize_field("region", &self.region)?;
        st.serialize_field("eigenvalues", &self.eigenvalues.as_array())?;
        st.serialize_field("case", &self.eigenvalues.case_tag)?;
        st.serialize_field("diagonalizable", &self.diagonalizable)?;
        st.serialize_field("normal_form", &self.verdict)?;
        st.serialize_field("consistency", &self.consistency)?;
        st.serialize_field("fixed_points", &self.fixed_points)?;
        st.end()
    }
}

/// Names of the cross-checks recorded in reports.
pub mod checks {
    pub const EIGEN_CASE: &str = "eigen_case_mapping";
    pub const ORACLE_EIGENVALUES: &str = "closed_form_vs_root_oracle";
    pub const ORACLE_CASE: &str = "case_tag_agreement";
    pub const FIXED_POINTS: &str = "fixed_point_oracle";
    pub const NORMAL_FORM: &str = "normal_form_invariants";
    pub const MINIMAL_POLYNOMIAL: &str = "minimal_polynomial";
    pub const PARABOLA_OUTER: &str = "parabola_outer_extension";
}

/// Verdict expected from the eigenvalue configuration alone.
pub fn verdict_from_case(case: CaseTag, diagonalizable: bool) -> Verdict {
    match case {
        CaseTag::II | CaseTag::IV | CaseTag::VI => Verdict::Elliptic,
        CaseTag::III | CaseTag::VII => Verdict::Loxodromic,
        // a real double eigenvalue is diagonalizable only for +-I
        CaseTag::I => Verdict::Parabolic,
        CaseTag::V if diagonalizable => Verdict::Elliptic,
        CaseTag::V => Verdict::Parabolic,
    }
}

fn outcome(check: &str, pass: bool) -> CheckOutcome {
    CheckOutcome { check: check.to_string(), pass }
}

fn identity_report(p: &QMatrix2, coeffs: QuarticCoeffs, tol: Tolerance) -> ClassificationReport {
    let minus = p.a.re() < 0.0;
    let l = Complex::new(if minus { -1.0 } else { 1.0 }, 0.0);
    ClassificationReport {
        verdict: if minus { IsometryClass::MinusIdentity } else { IsometryClass::Identity },
        tau: coeffs.tau,
        rho: coeffs.rho,
        region: region_of(&coeffs, tol),
        eigenvalues: SubstantialPair::new(l, l, tol),
        diagonalizable: true,
        consistency: Vec::new(),
        fixed_points: FixedPointSet::default(),
    }
}

fn normal_form(verdict: Verdict, pair: &SubstantialPair, fixed: Option<&FixedPointSet>) -> IsometryClass {
    match verdict {
        Verdict::Identity => IsometryClass::Identity,
        Verdict::MinusIdentity => IsometryClass::MinusIdentity,
        Verdict::Elliptic => {
            let from_points =
                fixed.and_then(|f| Some((f.eigenvalue_at(Location::Exterior)?, f.eigenvalue_at(Location::Interior)?)));
            let (l1, l2) = from_points.unwrap_or((pair.lambda1, pair.lambda2));
            let (a1, a2) = (l1.arg(), l2.arg());
            IsometryClass::Elliptic {
                alpha: principal_angle(a1 - a2),
                beta: principal_angle(a1 + a2),
                lambda1: l1,
                lambda2: l2,
            }
        }
        Verdict::Parabolic => IsometryClass::Parabolic { lambda: pair.lambda1 },
        Verdict::Loxodromic => IsometryClass::Loxodromic { r: pair.lambda1.norm(), theta: pair.lambda1.arg() },
    }
}

/// Classifies `P`, cross-checking the region verdict against the eigenvalue
/// configuration, the root oracle and the fixed points.
///
/// Any failed cross-check turns into [`Error::Inconsistent`] carrying the
/// full report.
pub fn classify(p: &QMatrix2, tol: Tolerance) -> Result<ClassificationReport> {
    let report = classify_unchecked(p, tol)?;
    if report.is_consistent() {
        Ok(report)
    } else {
        Err(Error::Inconsistent(Box::new(report)))
    }
}

/// [`classify`] without turning failed cross-checks into an error.
pub fn classify_unchecked(p: &QMatrix2, tol: Tolerance) -> Result<ClassificationReport> {
    if !is_sp11(p, tol) {
        return Err(Error::NotInSp11);
    }
    let coeffs = invariants_unchecked(p);
    if is_plus_minus_identity(p, tol) {
        return Ok(identity_report(p, coeffs, tol));
    }
    let region = region_of(&coeffs, tol);
    if !region.is_realizable() {
        return Err(Error::UnrealizableInvariants { tau: coeffs.tau, rho: coeffs.rho });
    }
    let pair = closed_form_in_region(&coeffs, region, tol)?;

    let structural = structural_diag_test(p, tol);
    let verdict = region.forced_verdict().unwrap_or(if structural { Verdict::Elliptic } else { Verdict::Parabolic });
    let diagonalizable = match region {
        Region::ParabolaArc => structural,
        Region::TangencyPoint => false,
        _ => true,
    };

    let mut consistency = Vec::new();
    consistency.push(outcome(checks::EIGEN_CASE, verdict_from_case(pair.case_tag, diagonalizable) == verdict));

    let oracle = eigenvalues_oracle(&coeffs, tol);
    match &oracle {
        Ok(o) => {
            consistency.push(outcome(checks::ORACLE_EIGENVALUES, pair.deviation(o) <= tol.agreement()));
            consistency.push(outcome(checks::ORACLE_CASE, pair.case_tag == o.case_tag));
        }
        Err(_) => consistency.push(outcome(checks::ORACLE_EIGENVALUES, false)),
    }

    if region == Region::ParabolaArc {
        let residual = minimal_polynomial_residual(p, pair.lambda1);
        let minimal = residual <= tol.agreement();
        consistency.push(outcome(checks::MINIMAL_POLYNOMIAL, minimal == structural));
    }

    let fixed = fixed_points_for(p, &pair, tol);
    let fixed_verdict = fixed.as_ref().map_err(Clone::clone).and_then(verdict_from_fixed_points);
    consistency.push(outcome(checks::FIXED_POINTS, fixed_verdict.as_ref().is_ok_and(|v| *v == verdict)));

    let class = normal_form(verdict, &pair, fixed.as_ref().ok());
    let back = class.invariants();
    let nf_ok = (back.tau - coeffs.tau).abs() <= tol.agreement() * coeffs.scale()
        && (back.rho - coeffs.rho).abs() <= tol.agreement() * coeffs.scale();
    consistency.push(outcome(checks::NORMAL_FORM, nf_ok));

    if region == Region::ParabolaOuter {
        consistency.push(outcome(checks::PARABOLA_OUTER, true));
    }

    Ok(ClassificationReport {
        verdict: class,
        tau: coeffs.tau,
        rho: coeffs.rho,
        region,
        eigenvalues: pair,
        diagonalizable,
        consistency,
        fixed_points: fixed.unwrap_or_default(),
    })
}
