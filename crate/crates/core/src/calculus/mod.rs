//! GLS norm, fundamental function, Young–Fenchel transform and tail bounds.
//!
//! With `ψ ∈ Ψ(a,b)`:
//!
//! ```text
//! ‖f‖Gψ       = sup_p ‖f‖_p / ψ(p)
//! φ[Gψ](δ)    = sup_p δ^{1/p} / ψ(p)
//! h[ψ](u)     = sup_p p·(u − ln ψ(p))
//! T[f](u)     ≤ exp(−h[ψ](ln(u/‖f‖Gψ)))
//! ```
//!
//! All suprema go through [`SupSearch`]. Ratios are maximized in log space.
//! The extremal `ψ_r` never reaches the engine: with `C/∞ = 0` each supremum
//! collapses to its value at `p = r`.

mod curve;
mod sup;
mod tail;

pub use curve::PNormCurve;
pub use sup::{sup_over_interval, SupSearch, SupSearchResult};
pub use tail::{empirical_tail, moment_generating, MeasuredFunction, TailCurve, TailPoint};

use crate::psi::{GeneratingFunction, PsiError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalculusError {
    #[error("NonFiniteObjective: objective is NaN at p = {p}")]
    NonFiniteObjective { p: f64 },
    #[error("BadTolerance: {0} must be positive")]
    BadTolerance(f64),
    #[error("DomainMismatch: {0}")]
    DomainMismatch(String),
    #[error("BadCurve: {0}")]
    BadCurve(String),
    #[error("EmptyGrid: no quadrature nodes")]
    EmptyGrid,
    #[error("BadGrid: {0}")]
    BadGrid(String),
    #[error("BadNorm: GLS norm {0} must be positive and finite")]
    BadNorm(f64),
    #[error("BadLevel: level {0} must be positive")]
    BadLevel(f64),
    #[error("BadArgument: {0}")]
    BadArgument(String),
    #[error("Overflow: moment generating function at z = {z} has log {log_value}")]
    Overflow { z: f64, log_value: f64 },
    #[error("Csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Psi(#[from] PsiError),
}

/// Which form of the exponential tail bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TailForm {
    /// `exp(−h[ψ](ln(u/‖f‖)))`, what Chebyshev's inequality actually yields.
    #[default]
    Chebyshev,
    /// `exp(−h[ψ](u/‖f‖))`, the argument written without the logarithm.
    Literal,
}

impl SupSearch {
    /// `‖f‖Gψ` for the function whose p-norms are sampled in `curve`.
    pub fn gls_norm(
        &self,
        curve: &PNormCurve,
        psi: &GeneratingFunction,
    ) -> Result<SupSearchResult, CalculusError> {
        if let Some(r) = psi.extremal_pivot() {
            let value = curve.value_at(r).ok_or_else(|| {
                CalculusError::DomainMismatch(format!(
                    "curve on [{}, {}] does not contain the pivot {r}",
                    curve.first_p(),
                    curve.last_p()
                ))
            })?;
            return Ok(SupSearchResult::exact(value, r));
        }
        if !curve.covers(psi.domain()) {
            return Err(CalculusError::DomainMismatch(format!(
                "curve on [{}, {}] does not cover {}",
                curve.first_p(),
                curve.last_p(),
                psi.domain()
            )));
        }
        let objective = |p: f64| curve.ln_at(p).unwrap_or(f64::NAN) - psi.ln_extended(p);
        Ok(self.maximize(objective, psi.domain())?.map_value(f64::exp))
    }

    /// `ln φ[Gψ](δ)` given `ln δ`; stays finite when `δ` itself would underflow.
    pub fn ln_fundamental_function(
        &self,
        psi: &GeneratingFunction,
        ln_delta: f64,
    ) -> Result<SupSearchResult, CalculusError> {
        if !ln_delta.is_finite() {
            return Err(CalculusError::BadArgument(format!(
                "ln δ = {ln_delta} must be finite"
            )));
        }
        if let Some(r) = psi.extremal_pivot() {
            return Ok(SupSearchResult::exact(ln_delta / r, r));
        }
        self.maximize(|p| ln_delta / p - psi.ln_extended(p), psi.domain())
    }

    /// `φ[Gψ](δ) = sup_p δ^{1/p}/ψ(p)`.
    pub fn fundamental_function(
        &self,
        psi: &GeneratingFunction,
        delta: f64,
    ) -> Result<SupSearchResult, CalculusError> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(CalculusError::BadArgument(format!(
                "δ = {delta} must be positive and finite"
            )));
        }
        Ok(self
            .ln_fundamental_function(psi, delta.ln())?
            .map_value(f64::exp))
    }

    /// `h[ψ](u) = sup_p p·(u − ln ψ(p))`; `+∞` when the supremum diverges.
    pub fn young_fenchel(
        &self,
        psi: &GeneratingFunction,
        u: f64,
    ) -> Result<SupSearchResult, CalculusError> {
        if u.is_nan() {
            return Err(CalculusError::BadArgument("u is NaN".into()));
        }
        if let Some(r) = psi.extremal_pivot() {
            return Ok(SupSearchResult::exact(r * u, r));
        }
        self.maximize(|p| p * (u - psi.ln_extended(p)), psi.domain())
    }

    /// Upper bound for `T[f](u)` given `gnorm = ‖f‖Gψ`.
    pub fn tail_bound(
        &self,
        psi: &GeneratingFunction,
        gnorm: f64,
        u: f64,
        form: TailForm,
    ) -> Result<f64, CalculusError> {
        if !(gnorm > 0.0 && gnorm.is_finite()) {
            return Err(CalculusError::BadNorm(gnorm));
        }
        if !(u > 0.0) {
            return Err(CalculusError::BadLevel(u));
        }
        let arg = match form {
            TailForm::Chebyshev => (u / gnorm).ln(),
            TailForm::Literal => u / gnorm,
        };
        let h = self.young_fenchel(psi, arg)?.value;
        Ok((-h).exp())
    }
}

/// `‖f‖Gψ` with the default engine.
pub fn gls_norm(
    curve: &PNormCurve,
    psi: &GeneratingFunction,
) -> Result<SupSearchResult, CalculusError> {
    SupSearch::default().gls_norm(curve, psi)
}

/// `φ[Gψ](δ)` with the default engine.
pub fn fundamental_function(
    psi: &GeneratingFunction,
    delta: f64,
) -> Result<SupSearchResult, CalculusError> {
    SupSearch::default().fundamental_function(psi, delta)
}

/// `h[ψ](u)` with the default engine.
pub fn young_fenchel(psi: &GeneratingFunction, u: f64) -> Result<SupSearchResult, CalculusError> {
    SupSearch::default().young_fenchel(psi, u)
}

/// Chebyshev-form tail bound with the default engine.
pub fn tail_bound(psi: &GeneratingFunction, gnorm: f64, u: f64) -> Result<f64, CalculusError> {
    SupSearch::default().tail_bound(psi, gnorm, u, TailForm::Chebyshev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::Interval;
    use std::f64::consts::E;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn flat(a: f64, b: f64) -> GeneratingFunction {
        GeneratingFunction::constant(1.0, iv(a, b)).unwrap()
    }

    fn sqrtp() -> GeneratingFunction {
        GeneratingFunction::subgaussian(iv(1.0, f64::INFINITY)).unwrap()
    }

    #[test]
    fn gls_norm_extremal_reads_the_curve() {
        let curve = PNormCurve::new(vec![(2.0, 1.0), (3.0, 1.25), (5.0, 1.5)], "c").unwrap();
        let r = gls_norm(
            &curve,
            &GeneratingFunction::extremal(3.0, iv(2.0, 6.0)).unwrap(),
        )
        .unwrap();
        assert_eq!(r.value, 1.25);
        assert_eq!(r.arg, 3.0);
        let off = GeneratingFunction::extremal(5.5, iv(2.0, 6.0)).unwrap();
        assert!(matches!(
            gls_norm(&curve, &off),
            Err(CalculusError::DomainMismatch(_))
        ));
    }

    #[test]
    fn gls_norm_constant_curve() {
        let curve = PNormCurve::new(vec![(2.0, 1.0), (4.0, 1.0), (6.0, 1.0)], "one").unwrap();
        let r = gls_norm(&curve, &flat(2.0, 6.0)).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(matches!(
            gls_norm(&curve, &flat(2.0, 7.0)),
            Err(CalculusError::DomainMismatch(_))
        ));
    }

    #[test]
    fn fundamental_function_examples() {
        let r = fundamental_function(&flat(2.0, 6.0), 0.01).unwrap();
        assert!((r.value - 0.4641588833612779).abs() < 1e-12);
        assert_eq!(r.arg, 6.0);
        assert!(!r.attained);

        let sq = GeneratingFunction::power(0.5, iv(2.0, 9.0)).unwrap();
        let r = fundamental_function(&sq, 1.0).unwrap();
        assert!((r.value - 1.0 / 2f64.sqrt()).abs() < 1e-15);

        let r = fundamental_function(&sqrtp(), (-1.0f64).exp()).unwrap();
        assert!((r.value - 0.4288819424803534).abs() < 1e-12);
        assert!((r.arg - 2.0).abs() < 1e-4);

        assert!(fundamental_function(&sqrtp(), 0.0).is_err());
    }

    #[test]
    fn young_fenchel_examples() {
        let r = young_fenchel(&sqrtp(), 1.0).unwrap();
        assert!((r.value - E / 2.0).abs() < 1e-12);
        let r = young_fenchel(&flat(2.0, 6.0), 1.0).unwrap();
        assert_eq!(r.value, 6.0);
        assert!(!r.attained);
        let r = young_fenchel(&flat(2.0, 6.0), -1.0).unwrap();
        assert_eq!(r.value, -2.0);
        assert_eq!(r.arg, 2.0);
        let r = young_fenchel(&flat(6.0, f64::INFINITY), 0.5).unwrap();
        assert_eq!(r.value, f64::INFINITY);
        assert!(!r.attained);
    }

    #[test]
    fn tail_bound_examples() {
        assert_eq!(tail_bound(&flat(2.0, 6.0), 1.0, 1.0).unwrap(), 1.0);
        let b = tail_bound(&sqrtp(), 1.0, E).unwrap();
        assert!((b - (-E / 2.0).exp()).abs() < 1e-12);
        let r = GeneratingFunction::extremal(4.0, iv(2.0, 6.0)).unwrap();
        let b = tail_bound(&r, 0.8, 2.0).unwrap();
        assert!((b - 0.4f64.powi(4)).abs() < 1e-15);
        assert!(matches!(
            tail_bound(&r, 0.0, 2.0),
            Err(CalculusError::BadNorm(_))
        ));
        assert!(matches!(
            tail_bound(&r, -1.0, 2.0),
            Err(CalculusError::BadNorm(_))
        ));
    }

    #[test]
    fn literal_form_uses_the_raw_ratio() {
        let s = SupSearch::default();
        let lit = s.tail_bound(&sqrtp(), 1.0, 1.0, TailForm::Literal).unwrap();
        assert!((lit - (-E / 2.0).exp()).abs() < 1e-12);
        let cheb = s
            .tail_bound(&sqrtp(), 1.0, 1.0, TailForm::Chebyshev)
            .unwrap();
        assert!(cheb > lit);
    }

    #[test]
    fn natural_psi_gives_unit_norm() {
        let curve = PNormCurve::new(vec![(2.0, 0.7), (3.0, 0.9), (6.0, 1.4)], "f").unwrap();
        let psi = GeneratingFunction::natural(curve.clone(), iv(2.0, 6.0)).unwrap();
        let r = gls_norm(&curve, &psi).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
    }
}
