//! Eigenfunction growth exponents and the GLS bounds built from them.
//!
//! For a compact `d`-manifold, L²-normalized eigenfunctions with
//! `−Δ e = λ² e` satisfy `‖e_λ‖_p ≤ C λ^{μ(p)}` with
//!
//! ```text
//! p_c  = 2(d+1)/(d−1)
//! μ(p) = (d−1)/2 · (1/2 − 1/p)     2 < p ≤ p_c
//! μ(p) = d(1/2 − 1/p) − 1/2        p_c ≤ p ≤ ∞
//! ```
//!
//! Dividing by `ψ(p)` and taking the sup over the domain of `ψ` gives
//!
//! ```text
//! ‖e_λ‖Gψ ≤ C λ^{(d−1)/4} φ[Gψ](λ^{(1−d)/2})    dom ψ ⊆ (2, p_c]
//! ‖e_λ‖Gψ ≤ C λ^{(d−1)/2} φ[Gψ](λ^{−d})         dom ψ ⊆ [p_c, ∞)
//! ```
//!
//! The constant `C(M,g)` is unknown, so every bound here is returned with
//! `C = 1`.

use crate::calculus::{CalculusError, SupSearch};
use crate::psi::GeneratingFunction;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExponentError {
    #[error("BadDimension: d = {0} must be at least 2")]
    BadDimension(u32),
    #[error("OutOfRange: p = {0} must exceed 2")]
    OutOfRange(f64),
    #[error("DomainViolation: {0}")]
    DomainViolation(String),
    #[error("BadLambda: λ = {0} must be positive and finite")]
    BadLambda(f64),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// Dimension `d` and the exponent data derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentProfile {
    dim: u32,
}

impl ExponentProfile {
    pub fn new(dim: u32) -> Result<Self, ExponentError> {
        if dim < 2 {
            return Err(ExponentError::BadDimension(dim));
        }
        Ok(ExponentProfile { dim })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    fn d(&self) -> f64 {
        self.dim as f64
    }

    /// `p_c = 2(d+1)/(d−1)`.
    pub fn critical_exponent(&self) -> f64 {
        2.0 * (self.d() + 1.0) / (self.d() - 1.0)
    }

    /// Small-`p` branch `(d−1)/2 · (1/2 − 1/p)`, evaluated for any `p`.
    pub fn mu_small(&self, p: f64) -> f64 {
        (self.d() - 1.0) / 2.0 * (0.5 - 1.0 / p)
    }

    /// Large-`p` branch `d(1/2 − 1/p) − 1/2`, evaluated for any `p`.
    pub fn mu_large(&self, p: f64) -> f64 {
        self.d() * (0.5 - 1.0 / p) - 0.5
    }

    /// `μ(p)` for `p > 2` (including `+∞`).
    pub fn mu(&self, p: f64) -> Result<f64, ExponentError> {
        if !(p > 2.0) {
            return Err(ExponentError::OutOfRange(p));
        }
        Ok(if p <= self.critical_exponent() {
            self.mu_small(p)
        } else {
            self.mu_large(p)
        })
    }

    /// Exponent of the source estimate `‖e_λ‖_p ≤ C λ^{μ(p)}`; same as [`Self::mu`].
    pub fn source_bound_exponent(&self, p: f64) -> Result<f64, ExponentError> {
        self.mu(p)
    }

    /// Right-hand side of the small-`p` GLS estimate with `C = 1`.
    pub fn theorem21_bound(
        &self,
        psi: &GeneratingFunction,
        lambda: f64,
    ) -> Result<f64, ExponentError> {
        self.theorem21_bound_with(&SupSearch::default(), psi, lambda)
    }

    pub fn theorem21_bound_with(
        &self,
        search: &SupSearch,
        psi: &GeneratingFunction,
        lambda: f64,
    ) -> Result<f64, ExponentError> {
        let ln_lambda = check_lambda(lambda)?;
        let dom = psi.domain();
        let pc = self.critical_exponent();
        if !(dom.lower() >= 2.0 && dom.upper() <= pc) {
            return Err(ExponentError::DomainViolation(format!(
                "small-p bound needs dom ψ ⊆ (2, {pc}], got {dom}"
            )));
        }
        let d = self.d();
        let ln_phi = search
            .ln_fundamental_function(psi, (1.0 - d) / 2.0 * ln_lambda)?
            .value;
        Ok(((d - 1.0) / 4.0 * ln_lambda + ln_phi).exp())
    }

    /// Right-hand side of the large-`p` GLS estimate with `C = 1`.
    pub fn theorem22_bound(
        &self,
        psi: &GeneratingFunction,
        lambda: f64,
    ) -> Result<f64, ExponentError> {
        self.theorem22_bound_with(&SupSearch::default(), psi, lambda)
    }

    pub fn theorem22_bound_with(
        &self,
        search: &SupSearch,
        psi: &GeneratingFunction,
        lambda: f64,
    ) -> Result<f64, ExponentError> {
        let ln_lambda = check_lambda(lambda)?;
        let dom = psi.domain();
        let pc = self.critical_exponent();
        if !(dom.lower() >= pc) {
            return Err(ExponentError::DomainViolation(format!(
                "large-p bound needs dom ψ ⊆ [{pc}, ∞), got {dom}"
            )));
        }
        let d = self.d();
        let ln_phi = search.ln_fundamental_function(psi, -d * ln_lambda)?.value;
        Ok(((d - 1.0) / 2.0 * ln_lambda + ln_phi).exp())
    }

    /// Sup-norm bound `λ^{(d−1)/2}` with `C = 1`.
    pub fn example21_sup_bound(&self, lambda: f64) -> Result<f64, ExponentError> {
        let ln_lambda = check_lambda(lambda)?;
        Ok(((self.d() - 1.0) / 2.0 * ln_lambda).exp())
    }
}

fn check_lambda(lambda: f64) -> Result<f64, ExponentError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ExponentError::BadLambda(lambda));
    }
    Ok(lambda.ln())
}
