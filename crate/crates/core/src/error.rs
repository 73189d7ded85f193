use num_complex::Complex64;
use thiserror::Error;

use crate::plasmon::ModeBranch;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("accuracy loss in {0}")]
    AccuracyLoss(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown unit tag `{0}`")]
    UnknownUnit(String),

    #[error("no convergence after {iterations} iterations (best {best}, residual {residual:e})")]
    NoConvergence {
        best: Complex64,
        residual: f64,
        iterations: usize,
    },

    #[error("inverse Laplace transform oscillates: node-doubling disagreement {disagreement:e} at t = {t}")]
    OscillationDetected { t: f64, disagreement: f64 },

    #[error("time step too coarse: dt vs dt/2 differ by {difference:e}")]
    StepTooCoarse { difference: f64 },

    #[error("branch n = {n} lost at k = {k}: {reason}")]
    BranchLost {
        n: u32,
        k: f64,
        reason: String,
        partial: Box<ModeBranch>,
    },

    #[error("frequency {omega} lies outside the traced branch span [{lo}, {hi}]")]
    GridOutsideSpan { omega: f64, lo: f64, hi: f64 },

    #[error("branch violation: Re z = {re} must be positive")]
    BranchViolation { re: f64 },

    #[error("cross-check failure: independent methods differ by {disagreement:e}")]
    CrossCheckFailure { disagreement: f64 },

    #[error("quadrature did not converge (estimated error {estimate:e})")]
    QuadratureNonconvergence { estimate: f64 },

    #[error("denominator vanishes at omega = {omega}")]
    PoleOnGrid { omega: f64 },

    #[error("series truncated too early: last term is {ratio:e} of the partial sum")]
    TruncationTooSmall { ratio: f64 },

    #[error("survival still {tail:e} at the end of the transform horizon")]
    TransformNonconvergence { tail: f64 },

    #[error("branches {lower} and {upper} approach within tolerance at q = {q}")]
    BranchCrossingAmbiguity { lower: usize, upper: usize, q: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that come from a solver failing rather than bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::AccuracyLoss(_)
                | Error::NoConvergence { .. }
                | Error::OscillationDetected { .. }
                | Error::StepTooCoarse { .. }
                | Error::BranchLost { .. }
                | Error::CrossCheckFailure { .. }
                | Error::QuadratureNonconvergence { .. }
                | Error::PoleOnGrid { .. }
                | Error::TruncationTooSmall { .. }
                | Error::TransformNonconvergence { .. }
                | Error::BranchCrossingAmbiguity { .. }
        )
    }
}
