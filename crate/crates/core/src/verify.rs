//! Machine-checkable forms of the eigenfunction estimates.
//!
//! With an unknown constant `C(M,g)`, an inequality `A(λ) ≤ C B(λ)` is
//! checked two ways: the log-log slope of `A` against `λ` must not exceed the
//! exponent of `B`, and the ratio `A/B` must not drift upward across a dyadic
//! range of `λ`. Tails are compared against the Chebyshev-form bound directly.
//!
//! Cells `(family, p, k)` are independent; they are evaluated in parallel and
//! collected in input order, so reports do not depend on scheduling.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::calculus::{
    empirical_tail, CalculusError, SupSearch, SupSearchResult, TailCurve, TailForm,
};
use crate::exponents::{ExponentError, ExponentProfile};
use crate::format::format_sig;
use crate::manifolds::{p_norm, p_norm_curve_on_grid, Eigenfunction, ManifoldError, NormConfig};
use crate::psi::{GeneratingFunction, Interval, PsiError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("DegenerateInput: {0}")]
    DegenerateInput(String),
    #[error("NearCritical: p = {p} is within {margin} of p_c = {pc}")]
    NearCritical { p: f64, pc: f64, margin: f64 },
    #[error("BadLevel: level {u} does not exceed the GLS norm {gnorm}")]
    BadLevel { u: f64, gnorm: f64 },
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Psi(#[from] PsiError),
}

/// Distance from `p_c` inside which slope fits are refused.
pub const CRITICAL_MARGIN: f64 = 0.25;

/// Eigenfunction families indexed by a degree `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenFamily {
    /// `Y_k^0` on `S²`.
    Zonal,
    /// `Y_k^k` on `S²`.
    HighestWeight,
    /// `e^{i k x}/(2π)` on `T²`, `λ = k`.
    Torus,
}

impl EigenFamily {
    pub fn member(&self, k: u32) -> Result<Eigenfunction, ManifoldError> {
        match self {
            EigenFamily::Zonal => Eigenfunction::zonal(k),
            EigenFamily::HighestWeight => Eigenfunction::highest_weight(k),
            EigenFamily::Torus => {
                let n = i32::try_from(k).map_err(|_| {
                    ManifoldError::BadDegree(format!("torus frequency {k} too large"))
                })?;
                Eigenfunction::torus((n, 0))
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EigenFamily::Zonal => "zonal",
            EigenFamily::HighestWeight => "highest_weight",
            EigenFamily::Torus => "torus",
        }
    }
}

impl FromStr for EigenFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zonal" => Ok(EigenFamily::Zonal),
            "hw" | "highest_weight" | "highest-weight" | "highestweight" => {
                Ok(EigenFamily::HighestWeight)
            }
            "torus" => Ok(EigenFamily::Torus),
            other => Err(format!(
                "unknown family `{other}` (expected zonal, highest-weight or torus)"
            )),
        }
    }
}

/// Least-squares power law `value ≈ A λ^slope`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub pairs: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in `ln value`.
    pub residual: f64,
    /// Exponent the slope is compared against, when there is one.
    pub target: Option<f64>,
}

impl GrowthFit {
    /// `slope ≤ target + tol`: the one-sided reading of an upper bound.
    pub fn within_upper(&self, tol: f64) -> bool {
        self.target.is_some_and(|t| self.slope <= t + tol)
    }

    /// `|slope − target| ≤ tol`: the family saturates the exponent.
    pub fn matches(&self, tol: f64) -> bool {
        self.target.is_some_and(|t| (self.slope - t).abs() <= tol)
    }
}

/// Ordinary least squares on `(ln λ, ln value)`.
pub fn fit_growth(values: &[(f64, f64)]) -> Result<GrowthFit, VerifyError> {
    if values.len() < 3 {
        return Err(VerifyError::DegenerateInput(format!(
            "need at least 3 points, got {}",
            values.len()
        )));
    }
    if let Some(&(l, v)) = values
        .iter()
        .find(|(l, v)| !(*l > 0.0 && *v > 0.0 && l.is_finite() && v.is_finite()))
    {
        return Err(VerifyError::DegenerateInput(format!(
            "(λ, value) = ({l}, {v}) must be positive and finite"
        )));
    }
    let mut lambdas: Vec<f64> = values.iter().map(|p| p.0).collect();
    lambdas.sort_by(f64::total_cmp);
    if lambdas.windows(2).any(|w| w[0] == w[1]) {
        return Err(VerifyError::DegenerateInput(
            "λ values must be distinct".into(),
        ));
    }
    let n = values.len() as f64;
    let xs: Vec<f64> = values.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(GrowthFit {
        pairs: values.to_vec(),
        slope,
        intercept,
        residual,
        target: None,
    })
}

/// Numerical settings shared by the checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub norms: NormConfig,
    pub search: SupSearch,
    /// Samples of each norm curve across a `ψ` domain.
    pub curve_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            norms: NormConfig::default(),
            search: SupSearch::default(),
            curve_samples: 33,
        }
    }
}

fn check_degrees(ks: &[u32]) -> Result<(), VerifyError> {
    let mut sorted = ks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 4 || sorted.len() != ks.len() {
        return Err(VerifyError::DegenerateInput(format!(
            "need at least 4 distinct degrees, got {ks:?}"
        )));
    }
    if sorted[0] == 0 || (sorted[sorted.len() - 1] as f64) < 8.0 * sorted[0] as f64 {
        return Err(VerifyError::DegenerateInput(format!(
            "degrees {ks:?} must span at least 3 octaves"
        )));
    }
    Ok(())
}

/// Growth of `‖e_λ‖_p` in `λ` across a family, against the target `μ(p)`.
///
/// `p = ∞` fits the sup-norms. The pass/fail decision is left to the caller.
pub fn check_source_estimate(
    family: EigenFamily,
    p: f64,
    ks: &[u32],
    profile: &ExponentProfile,
    cfg: &VerifyConfig,
) -> Result<GrowthFit, VerifyError> {
    let target = profile.mu(p)?;
    let pc = profile.critical_exponent();
    if (p - pc).abs() < CRITICAL_MARGIN {
        return Err(VerifyError::NearCritical {
            p,
            pc,
            margin: CRITICAL_MARGIN,
        });
    }
    check_degrees(ks)?;
    let values = ks
        .par_iter()
        .map(|&k| -> Result<(f64, f64), VerifyError> {
            let e = family.member(k)?;
            Ok((e.lambda(), p_norm(&e, p, &cfg.norms)?))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut fit = fit_growth(&values)?;
    fit.target = Some(target);
    Ok(fit)
}

/// Which GLS estimate a ratio trace is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Small `p`: `dom ψ ⊆ (2, p_c]`.
    SmallP,
    /// Large `p`: `dom ψ ⊆ [p_c, ∞)`.
    LargeP,
}

impl Theorem {
    pub fn number(&self) -> u32 {
        match self {
            Theorem::SmallP => 21,
            Theorem::LargeP => 22,
        }
    }

    pub fn bound(
        &self,
        profile: &ExponentProfile,
        search: &SupSearch,
        psi: &GeneratingFunction,
        lambda: f64,
    ) -> Result<f64, ExponentError> {
        match self {
            Theorem::SmallP => profile.theorem21_bound_with(search, psi, lambda),
            Theorem::LargeP => profile.theorem22_bound_with(search, psi, lambda),
        }
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "21" | "2.1" => Ok(Theorem::SmallP),
            "22" | "2.2" => Ok(Theorem::LargeP),
            other => Err(format!("unknown theorem `{other}` (expected 21 or 22)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioEntry {
    pub k: u32,
    pub lambda: f64,
    /// `‖e_λ‖Gψ`.
    pub lhs: f64,
    /// Bound with `C = 1`.
    pub rhs: f64,
    pub ratio: f64,
}

/// `‖e_λ‖Gψ / bound(λ)` across a family.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioTrace {
    pub entries: Vec<RatioEntry>,
}

impl RatioTrace {
    fn by_lambda(&self) -> (RatioEntry, RatioEntry) {
        let lo = self
            .entries
            .iter()
            .min_by(|a, b| a.lambda.total_cmp(&b.lambda))
            .copied();
        let hi = self
            .entries
            .iter()
            .max_by(|a, b| a.lambda.total_cmp(&b.lambda))
            .copied();
        (lo.expect("non-empty trace"), hi.expect("non-empty trace"))
    }

    /// `ratio(λ_max) / ratio(λ_min)`: upward drift across the trace.
    pub fn drift(&self) -> f64 {
        let (lo, hi) = self.by_lambda();
        hi.ratio / lo.ratio
    }

    /// `max ratio / min ratio`.
    pub fn spread(&self) -> f64 {
        let max = self
            .entries
            .iter()
            .map(|e| e.ratio)
            .fold(f64::NEG_INFINITY, f64::max);
        let min = self
            .entries
            .iter()
            .map(|e| e.ratio)
            .fold(f64::INFINITY, f64::min);
        max / min
    }

    pub fn all_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.ratio.is_finite() && e.ratio > 0.0 && e.lhs.is_finite() && e.rhs.is_finite())
    }
}

/// `p` values at which a norm curve is sampled for `ψ`: uniform in `1/p`
/// across the closed domain (ending at `p = ∞` when unbounded), or just the
/// pivot for the extremal family.
pub fn curve_points(psi: &GeneratingFunction, samples: usize) -> Vec<f64> {
    if let Some(r) = psi.extremal_pivot() {
        return vec![r];
    }
    let dom: &Interval = psi.domain();
    let n = samples.max(2);
    let (s0, s1) = (1.0 / dom.lower(), 1.0 / dom.upper());
    let mut ps: Vec<f64> = (0..n)
        .map(|i| {
            let s = s0 + (s1 - s0) * i as f64 / (n - 1) as f64;
            1.0 / s
        })
        .collect();
    ps[0] = dom.lower();
    ps[n - 1] = dom.upper();
    ps
}

/// `‖e‖Gψ` computed from a sampled norm curve.
pub fn eigen_gls_norm(
    e: &Eigenfunction,
    psi: &GeneratingFunction,
    cfg: &VerifyConfig,
) -> Result<SupSearchResult, VerifyError> {
    let (curve, _) = p_norm_curve_on_grid(e, &curve_points(psi, cfg.curve_samples), &cfg.norms)?;
    Ok(cfg.search.gls_norm(&curve, psi)?)
}

/// Ratio of each eigenfunction's GLS norm to the theorem's bound.
pub fn check_theorem_bound(
    which: Theorem,
    family: EigenFamily,
    psi: &GeneratingFunction,
    ks: &[u32],
    profile: &ExponentProfile,
    cfg: &VerifyConfig,
) -> Result<RatioTrace, VerifyError> {
    check_degrees(ks)?;
    // domain preconditions fail fast, before any quadrature
    which.bound(profile, &cfg.search, psi, 1.0)?;
    let entries = ks
        .par_iter()
        .map(|&k| -> Result<RatioEntry, VerifyError> {
            let e = family.member(k)?;
            let lambda = e.lambda();
            let rhs = which.bound(profile, &cfg.search, psi, lambda)?;
            let lhs = eigen_gls_norm(&e, psi, cfg)?.value;
            Ok(RatioEntry {
                k,
                lambda,
                lhs,
                rhs,
                ratio: lhs / rhs,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RatioTrace { entries })
}

/// Empirical tail of one eigenfunction next to its GLS tail bound.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCheck {
    pub gnorm: f64,
    pub sup_norm: f64,
    pub curve: TailCurve,
}

impl TailCheck {
    /// Largest `T_empirical / T_bound` over levels with a positive bound.
    pub fn worst_ratio(&self) -> f64 {
        self.curve
            .points
            .iter()
            .filter_map(|pt| pt.bound.filter(|b| *b > 0.0).map(|b| pt.tail / b))
            .fold(0.0, f64::max)
    }
}

/// Tail of `|e|` on the converged quadrature grid against
/// `exp(−h[ψ](ln(u/‖e‖Gψ)))` at each level `u > ‖e‖Gψ`.
pub fn check_tail(
    family: EigenFamily,
    k: u32,
    psi: &GeneratingFunction,
    levels: &[f64],
    cfg: &VerifyConfig,
) -> Result<TailCheck, VerifyError> {
    let e = family.member(k)?;
    let (curve, grid) =
        p_norm_curve_on_grid(&e, &curve_points(psi, cfg.curve_samples), &cfg.norms)?;
    let gnorm = cfg.search.gls_norm(&curve, psi)?.value;
    if let Some(&u) = levels.iter().find(|u| !(**u > gnorm)) {
        return Err(VerifyError::BadLevel { u, gnorm });
    }
    let samples = grid.sample_rows(&e)?;
    let mut tail = empirical_tail(&samples, levels)?;
    for pt in &mut tail.points {
        pt.bound = Some(
            cfg.search
                .tail_bound(psi, gnorm, pt.u, TailForm::Chebyshev)?,
        );
    }
    Ok(TailCheck {
        gnorm,
        sup_norm: e.sup_norm(),
        curve: tail,
    })
}

/// One row of a verification report.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ReportRow {
    pub family: String,
    /// `p` or the `ψ` label.
    pub param: String,
    pub k: u32,
    pub lambda: f64,
    pub value: f64,
    pub target: f64,
    /// Fitted slope or ratio, depending on the check.
    pub metric: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Rows plus pass/fail checks.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Report {
    pub version: u32,
    pub rows: Vec<ReportRow>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report {
            version: 1,
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Growth rows (`value` = norm, `target` = `μ(p)`, `metric` = slope) and
    /// one check: `slope ≤ target + tol`, or `|slope − target| ≤ tol` when
    /// `two_sided`.
    pub fn growth(
        family: EigenFamily,
        p: f64,
        ks: &[u32],
        fit: &GrowthFit,
        tol: f64,
        two_sided: bool,
    ) -> Self {
        let target = fit.target.unwrap_or(f64::NAN);
        let rows = ks
            .iter()
            .zip(&fit.pairs)
            .map(|(&k, &(lambda, value))| ReportRow {
                family: family.name().into(),
                param: format_sig(p, 12),
                k,
                lambda,
                value,
                target,
                metric: fit.slope,
            })
            .collect();
        let pass = if two_sided {
            fit.matches(tol)
        } else {
            fit.within_upper(tol)
        };
        let detail = format!(
            "slope={}±{}, target={}, {}",
            format_sig(fit.slope, 4),
            format_sig(fit.residual, 2),
            format_sig(target, 4),
            if pass { "PASS" } else { "FAIL" }
        );
        Report {
            version: 1,
            rows,
            checks: vec![Check {
                name: format!("growth:{}:p={}", family.name(), format_sig(p, 12)),
                pass,
                detail,
            }],
        }
    }

    /// Ratio rows (`value` = GLS norm, `target` = bound, `metric` = ratio)
    /// and one check: finite ratios with `ratio(λ_max)/ratio(λ_min) ≤ max_drift`.
    pub fn ratio(
        which: Theorem,
        family: EigenFamily,
        psi: &GeneratingFunction,
        trace: &RatioTrace,
        max_drift: f64,
    ) -> Self {
        let rows = trace
            .entries
            .iter()
            .map(|e| ReportRow {
                family: family.name().into(),
                param: psi.label(),
                k: e.k,
                lambda: e.lambda,
                value: e.lhs,
                target: e.rhs,
                metric: e.ratio,
            })
            .collect();
        let pass = trace.all_finite() && trace.drift() <= max_drift;
        let detail = format!(
            "drift={}, spread={}, max_drift={}, {}",
            format_sig(trace.drift(), 4),
            format_sig(trace.spread(), 4),
            format_sig(max_drift, 4),
            if pass { "PASS" } else { "FAIL" }
        );
        Report {
            version: 1,
            rows,
            checks: vec![Check {
                name: format!("ratio:{}:{}", which.number(), family.name()),
                pass,
                detail,
            }],
        }
    }

    /// Tail rows (`value` = empirical tail, `target` = bound, `metric` = level `u`)
    /// and one check: no level with `T > bound·(1 + slack)`.
    pub fn tail(
        family: EigenFamily,
        k: u32,
        psi: &GeneratingFunction,
        check: &TailCheck,
        slack: f64,
    ) -> Self {
        let lambda = family.member(k).map(|e| e.lambda()).unwrap_or(f64::NAN);
        let rows = check
            .curve
            .points
            .iter()
            .map(|pt| ReportRow {
                family: family.name().into(),
                param: psi.label(),
                k,
                lambda,
                value: pt.tail,
                target: pt.bound.unwrap_or(f64::NAN),
                metric: pt.u,
            })
            .collect();
        let violations = check.curve.violations(slack).len();
        let pass = violations == 0;
        let detail = format!(
            "gnorm={}, levels={}, violations={}, worst={}, {}",
            format_sig(check.gnorm, 6),
            check.curve.points.len(),
            violations,
            format_sig(check.worst_ratio(), 4),
            if pass { "PASS" } else { "FAIL" }
        );
        Report {
            version: 1,
            rows,
            checks: vec![Check {
                name: format!("tail:{}:k={k}", family.name()),
                pass,
                detail,
            }],
        }
    }

    /// CSV rows `family,param,k,lambda,value,target,metric` with `digits` significant digits.
    pub fn write_csv<W: Write>(&self, writer: W, digits: usize) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "family", "param", "k", "lambda", "value", "target", "metric",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.family.clone(),
                r.param.clone(),
                r.k.to_string(),
                format_sig(r.lambda, digits),
                format_sig(r.value, digits),
                format_sig(r.target, digits),
                format_sig(r.metric, digits),
            ])?;
        }
        w.flush()
    }
}

impl Default for Report {
    fn default() -> Self {
        Report::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let fit = fit_growth(&[(1.0, 1.0), (2.0, 2.0), (4.0, 4.0)]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-15);
        assert!(fit.residual < 1e-15);
        let flat = fit_growth(&[(1.0, 3.0), (2.0, 3.0), (4.0, 3.0)]).unwrap();
        assert!(flat.slope.abs() < 1e-15);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        assert!(fit_growth(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_growth(&[(1.0, 1.0), (1.0, 2.0), (4.0, 4.0)]).is_err());
        assert!(fit_growth(&[(1.0, 1.0), (2.0, 0.0), (4.0, 4.0)]).is_err());
    }

    #[test]
    fn zonal_sup_norm_slope() {
        let pairs: Vec<(f64, f64)> = [16u32, 32, 64, 128]
            .iter()
            .map(|&k| {
                let e = Eigenfunction::zonal(k).unwrap();
                (e.lambda(), e.sup_norm())
            })
            .collect();
        let fit = fit_growth(&pairs).unwrap();
        assert!((fit.slope - 0.5).abs() < 0.03, "slope {}", fit.slope);
    }

    #[test]
    fn degree_checks() {
        assert!(check_degrees(&[16, 32, 64, 128]).is_ok());
        assert!(check_degrees(&[16, 32, 64]).is_err());
        assert!(check_degrees(&[16, 17, 18, 19]).is_err());
        assert!(check_degrees(&[16, 16, 64, 128]).is_err());
    }

    #[test]
    fn near_critical_is_refused() {
        let d2 = ExponentProfile::new(2).unwrap();
        let r = check_source_estimate(
            EigenFamily::Torus,
            6.1,
            &[16, 32, 64, 128],
            &d2,
            &VerifyConfig::default(),
        );
        assert!(matches!(r, Err(VerifyError::NearCritical { .. })));
    }

    #[test]
    fn torus_slope_is_zero() {
        let d2 = ExponentProfile::new(2).unwrap();
        let fit = check_source_estimate(
            EigenFamily::Torus,
            4.0,
            &[16, 32, 64, 128],
            &d2,
            &VerifyConfig::default(),
        )
        .unwrap();
        assert!(fit.slope.abs() < 1e-10);
        assert_eq!(fit.target, Some(0.125));
        assert!(fit.within_upper(0.0));
    }

    #[test]
    fn curve_points_cover_domain() {
        let psi =
            GeneratingFunction::constant(1.0, Interval::new(6.0, f64::INFINITY).unwrap()).unwrap();
        let ps = curve_points(&psi, 9);
        assert_eq!(ps.len(), 9);
        assert_eq!(ps[0], 6.0);
        assert_eq!(ps[8], f64::INFINITY);
        assert!(ps.windows(2).all(|w| w[1] > w[0]));
        let ext = GeneratingFunction::extremal(10.0, Interval::new(6.0, 20.0).unwrap()).unwrap();
        assert_eq!(curve_points(&ext, 9), vec![10.0]);
    }

    #[test]
    fn family_parsing() {
        assert_eq!(
            "hw".parse::<EigenFamily>().unwrap(),
            EigenFamily::HighestWeight
        );
        assert_eq!("Zonal".parse::<EigenFamily>().unwrap(), EigenFamily::Zonal);
        assert!("ellipsoid".parse::<EigenFamily>().is_err());
        assert_eq!("22".parse::<Theorem>().unwrap(), Theorem::LargeP);
    }
}
