//! Adaptive p-norms of eigenfunctions.
//!
//! The grid is matched to the eigenfunction:
//!
//! - zonal harmonics use composite Gauss–Legendre in `cos θ` with panels
//!   split at the roots of `P_k`, so `|P_k|^p` is smooth on every panel (a
//!   polynomial for integer `p`); `order` is the per-panel order;
//! - highest-weight harmonics use a single Gauss–Legendre panel of `order` nodes;
//! - torus waves use an `order × order` uniform grid.
//!
//! The order doubles from a small start until two successive norms agree to
//! `rel_tol`; the finer value is returned.

use rayon::prelude::*;

use super::{Eigenfunction, HarmonicKind, ManifoldError, QuadratureGrid};
use crate::calculus::PNormCurve;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConfig {
    /// Relative agreement required between successive doublings.
    pub rel_tol: f64,
    /// Largest quadrature order tried before giving up.
    pub max_order: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig {
            rel_tol: 1e-8,
            max_order: 4096,
        }
    }
}

fn start_order(e: &Eigenfunction) -> usize {
    match e {
        Eigenfunction::Sphere(h) if h.kind() == HarmonicKind::HighestWeight => 16,
        _ => 8,
    }
}

/// Builds grids of a given order for one eigenfunction.
struct GridFamily<'a> {
    e: &'a Eigenfunction,
    breaks: Vec<f64>,
}

impl<'a> GridFamily<'a> {
    fn new(e: &'a Eigenfunction) -> Self {
        let breaks = match e {
            Eigenfunction::Sphere(h) => h.nodal_cosines(),
            Eigenfunction::Torus(_) => Vec::new(),
        };
        GridFamily { e, breaks }
    }

    fn grid(&self, order: usize) -> Result<QuadratureGrid, ManifoldError> {
        match self.e {
            Eigenfunction::Sphere(_) if self.breaks.is_empty() => QuadratureGrid::sphere(order),
            Eigenfunction::Sphere(_) => QuadratureGrid::sphere_split(order, &self.breaks),
            Eigenfunction::Torus(_) => QuadratureGrid::torus(order),
        }
    }

    /// Smallest doubled order at which the norm has settled, and the norm there.
    fn converge(&self, p: f64, cfg: &NormConfig) -> Result<(usize, f64), ManifoldError> {
        let mut order = start_order(self.e);
        let mut prev = self.grid(order)?.p_norm(self.e, p)?;
        let mut change = f64::INFINITY;
        loop {
            let next = order * 2;
            if next > cfg.max_order {
                return Err(ManifoldError::NoConvergence {
                    p,
                    order,
                    change,
                    tol: cfg.rel_tol,
                });
            }
            let value = self.grid(next)?.p_norm(self.e, p)?;
            change = ((value - prev) / value).abs();
            if change <= cfg.rel_tol {
                return Ok((next, value));
            }
            prev = value;
            order = next;
        }
    }
}

fn check_p(p: f64) -> Result<(), ManifoldError> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(ManifoldError::BadExponent(p))
    }
}

/// `‖e‖_p` to relative accuracy `cfg.rel_tol` (`p = ∞` gives the sup-norm).
pub fn p_norm(e: &Eigenfunction, p: f64, cfg: &NormConfig) -> Result<f64, ManifoldError> {
    check_p(p)?;
    if p.is_infinite() {
        return Ok(sup_norm(e));
    }
    Ok(GridFamily::new(e).converge(p, cfg)?.1)
}

/// `max |e|` in closed form.
pub fn sup_norm(e: &Eigenfunction) -> f64 {
    e.sup_norm()
}

/// Norm curve over `ps` (strictly increasing, each `≥ 1`, `∞` allowed), all
/// finite samples taken on one grid fine enough for every `p`.
pub fn p_norm_curve(
    e: &Eigenfunction,
    ps: &[f64],
    cfg: &NormConfig,
) -> Result<PNormCurve, ManifoldError> {
    Ok(p_norm_curve_on_grid(e, ps, cfg)?.0)
}

/// Like [`p_norm_curve`], also returning the shared grid.
pub fn p_norm_curve_on_grid(
    e: &Eigenfunction,
    ps: &[f64],
    cfg: &NormConfig,
) -> Result<(PNormCurve, QuadratureGrid), ManifoldError> {
    for &p in ps {
        check_p(p)?;
    }
    let family = GridFamily::new(e);
    let orders = ps
        .par_iter()
        .filter(|p| p.is_finite())
        .map(|&p| family.converge(p, cfg).map(|(order, _)| order))
        .collect::<Result<Vec<_>, _>>()?;
    let order = orders.into_iter().max().unwrap_or_else(|| start_order(e));
    let grid = family.grid(order)?;
    let samples = grid.sample_rows(e)?;
    let points = ps
        .iter()
        .map(|&p| {
            (
                p,
                if p.is_infinite() {
                    e.sup_norm()
                } else {
                    samples.p_norm(p)
                },
            )
        })
        .collect();
    let curve = PNormCurve::new(points, e.label())?;
    Ok((curve, grid))
}
