//! Grand Lebesgue Space (GLS) calculus and eigenfunction norm checks.
//!
//! The crate is split along the lines of the computation:
//!
//! - [`psi`]: generating functions `ψ ∈ Ψ(a,b)` (the weights of a GLS norm).
//! - [`calculus`]: GLS norms, the fundamental function, the Young–Fenchel
//!   transform, tail functions and bounds, all driven by one supremum engine.
//! - [`exponents`]: the critical exponent `p_c`, the piecewise growth exponent
//!   `μ(p)`, and the right-hand sides of the eigenfunction GLS estimates.
//! - [`manifolds`]: exact L²-normalized Laplace–Beltrami eigenfunctions on the
//!   round 2-sphere and the flat 2-torus, with quadrature and p-norms.
//! - [`verify`]: growth fits, ratio traces and tail comparisons that turn the
//!   inequalities into machine-checkable statements.
//! - [`format`]: fixed-width number formatting shared by the CSV/JSON writers.

// NaN-rejecting checks are written as `!(x > y)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod exponents;
pub mod format;
pub mod manifolds;
pub mod psi;
pub mod verify;

pub use calculus::{CalculusError, PNormCurve, SupSearch, SupSearchResult, TailCurve};
pub use exponents::{ExponentError, ExponentProfile};
pub use manifolds::{Eigenfunction, ManifoldError, QuadratureGrid};
pub use psi::{Family, GeneratingFunction, Interval, PsiError};
pub use verify::{EigenFamily, GrowthFit, RatioTrace, VerifyError};

/// Any error raised by the library, tagged with the module it came from.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl Error {
    /// Name of the module that raised the error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Psi(_) => "psi_functions",
            Error::Calculus(_) => "gls_calculus",
            Error::Exponent(_) => "sogge_exponents",
            Error::Manifold(_) => "model_manifolds",
            Error::Verify(_) => "verify",
        }
    }
}
