use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The mode at `p` is gapless for the named Hamiltonian, so the
    /// Bogoliubov angle (and anything derived from it) is undefined.
    #[error("degenerate (gapless) mode at p = {p}")]
    DegenerateMode { p: f64 },

    #[error("quadrature did not converge after {refinements} refinements (estimated error {estimate:e}, integral {value:e})")]
    QuadratureFailed {
        refinements: usize,
        estimate: f64,
        value: f64,
    },

    #[error("integrand returned a non-finite value at p = {p}")]
    NonFiniteIntegrand { p: f64 },

    /// The GGE weight was requested for a Hamiltonian other than the
    /// post-quench one.
    #[error("weight refers to post-quench parameters {expected:?}, but integrals requested for {actual:?}")]
    ParamsMismatch {
        expected: (f64, f64),
        actual: (f64, f64),
    },

    #[error("thermalization condition inconsistent: mode-energy target {lhs:e} exceeds ground-state value {total:e}")]
    InconsistentEnergy { lhs: f64, total: f64 },

    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("bisection did not reach tolerance within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("unphysical correlator set: both partial-transpose minima negative (mu1 = {mu1}, mu2 = {mu2})")]
    Unphysical { mu1: f64, mu2: f64 },

    #[error("matrix is not symmetric (|a[{i}][{j}] - a[{j}][{i}]| = {diff:e})")]
    NotSymmetric { i: usize, j: usize, diff: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
