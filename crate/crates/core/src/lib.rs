//! Elliptic, parabolic and loxodromic classification of Sp(1,1).
//!
//! An element `P` of Sp(1,1) is classified as elliptic, parabolic or
//! loxodromic from the trace invariants `(tau, rho)` of its complex
//! representation `chi(P)`, and the verdict is cross-checked against the
//! eigenvalue configuration, a numerical root oracle and the fixed points
//! of the Möbius action on the ball.
//!
//! ```
//! use quatisom_core::{classify, QMatrix2, Quaternion, Tolerance, Verdict};
//!
//! let p = QMatrix2::new(
//!     Quaternion::new(1.0, 1.0, 0.0, 0.0),
//!     Quaternion::real(1.0),
//!     Quaternion::real(-1.0),
//!     Quaternion::new(-1.0, 1.0, 0.0, 0.0),
//! );
//! let report = classify(&p, Tolerance::default()).unwrap();
//! assert_eq!(report.verdict.verdict(), Verdict::Parabolic);
//! ```

// index loops mirror the linear algebra; negated comparisons reject NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod action;
pub mod checks;
pub mod classify;
pub mod error;
pub mod quaternion;
pub mod representation;
pub mod sp11;
pub mod spectrum;
pub mod tolerance;

pub use action::{
    classify_by_fixed_points, fixed_points, mobius_apply, normal_form_action, BallPoint, FixedPoint, FixedPointSet,
    Location,
};
pub use classify::{
    classify, classify_unchecked, region_of, structural_diag_test, CheckOutcome, ClassificationReport, IsometryClass,
    Region, Verdict,
};
pub use error::{Error, Result};
pub use quaternion::{Complex, Quaternion};
pub use representation::{
    char_poly_coeffs, chi, discriminant_factors, quartic_roots, sylvester_resultant, unchi, CMatrix4, QMatrix2,
    QuarticCoeffs,
};
pub use sp11::{
    herm_form, is_sp11, sample_indexed, sample_sp11, sp11_inverse, vector_sign, HVector, SamplerKind, VectorSign,
};
pub use spectrum::{classify_case, eigenvalues_closed_form, eigenvalues_oracle, CaseTag, SubstantialPair};
pub use tolerance::{Tolerance, DEFAULT_EPS};
