use thiserror::Error;

use crate::classify::ClassificationReport;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero quaternion")]
    DivisionByZero,

    #[error("not in Sp(1,1)")]
    NotInSp11,

    #[error("zero vector has no sign")]
    ZeroVector,

    #[error("root finder did not converge (best residual {best_residual:e})")]
    NonConvergence { best_residual: f64 },

    #[error("unrealizable invariants (tau = {tau}, rho = {rho})")]
    UnrealizableInvariants { tau: f64, rho: f64 },

    #[error("conjugate pairing failed")]
    ConjugatePairingFailed,

    #[error("eigenvector extraction failed: {0}")]
    EigenvectorExtractionFailed(String),

    #[error("trichotomy violation: {interior} interior, {boundary} boundary fixed points")]
    TrichotomyViolation { interior: usize, boundary: usize },

    #[error("fixed point residual {residual:e} exceeds tolerance")]
    FixedPointResidual { residual: f64 },

    #[error("Möbius denominator vanishes")]
    DenominatorVanishes,

    #[error("normal form parameters do not match the isometry class")]
    ParameterMismatch,

    #[error("the map is plus or minus the identity")]
    PlusMinusIdentity,

    #[error("inconsistent classification: {}", failed_checks(.0))]
    Inconsistent(Box<ClassificationReport>),
}

fn failed_checks(report: &ClassificationReport) -> String {
    report.consistency.iter().filter(|c| !c.pass).map(|c| c.check.as_str()).collect::<Vec<_>>().join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
