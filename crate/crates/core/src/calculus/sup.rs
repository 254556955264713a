//! One-dimensional supremum over an open interval `(a, b) ⊂ [1, ∞]`.
//!
//! Two phases:
//!
//! 1. A coarse grid, log-spaced in `p`, whose first and last nodes are the
//!    endpoint limits. For `b = ∞` the grid covers `decades` decades past `a`
//!    and closes with the node `p = +∞` (`s = 1/p = 0`).
//! 2. Golden-section refinement on the two grid cells around the best node,
//!    in `ln p` for finite cells and in `s = 1/p` for the cell reaching `∞`.
//!
//! Endpoint nodes are limits, not domain points: a NaN there is ignored, while
//! a NaN strictly inside the domain is an error. A sup found at (or within
//! tolerance of) an open endpoint is reported with `attained = false` and the
//! endpoint as `arg`. Divergence (`+∞` at `p = ∞`) comes back as `+∞`.
//!
//! For unimodal objectives the value is within `tol·(1+|value|)` of the
//! supremum; otherwise the grid phase still yields a lower bound.

use super::CalculusError;
use crate::psi::Interval;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Outcome of a supremum search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupSearchResult {
    /// The supremum; may be `±∞`.
    pub value: f64,
    /// Where it is reached, or the endpoint it is approached at (possibly `+∞`).
    pub arg: f64,
    /// Golden-section iterations spent.
    pub iterations: usize,
    /// The refinement bracket shrank below the tolerance.
    pub converged: bool,
    /// `false` when the sup is only approached at an open endpoint.
    pub attained: bool,
}

impl SupSearchResult {
    pub(crate) fn exact(value: f64, arg: f64) -> Self {
        SupSearchResult {
            value,
            arg,
            iterations: 0,
            converged: true,
            attained: true,
        }
    }

    pub(crate) fn map_value(self, f: impl FnOnce(f64) -> f64) -> Self {
        SupSearchResult {
            value: f(self.value),
            ..self
        }
    }
}

/// Configuration of the supremum engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupSearch {
    /// Relative bracket width (in `p`) at which refinement stops.
    pub tol: f64,
    /// Coarse grid nodes for a bounded domain (at least 65 are used).
    pub grid_nodes: usize,
    /// Decades past `a` covered by the finite grid nodes when `b = ∞`.
    pub decades: f64,
    pub max_iter: usize,
}

impl Default for SupSearch {
    fn default() -> Self {
        SupSearch {
            tol: 1e-10,
            grid_nodes: 129,
            decades: 16.0,
            max_iter: 500,
        }
    }
}

#[derive(Clone, Copy)]
enum Coord {
    LogP,
    InvP,
}

impl Coord {
    fn to_p(self, x: f64) -> f64 {
        match self {
            Coord::LogP => x.exp(),
            Coord::InvP => 1.0 / x,
        }
    }

    fn of_p(self, p: f64) -> f64 {
        match self {
            Coord::LogP => p.ln(),
            Coord::InvP => 1.0 / p,
        }
    }
}

impl SupSearch {
    pub fn with_tol(tol: f64) -> Self {
        SupSearch {
            tol,
            ..SupSearch::default()
        }
    }

    fn nodes(&self, domain: &Interval) -> Vec<f64> {
        let a = domain.lower();
        if domain.is_bounded() {
            let b = domain.upper();
            let n = self.grid_nodes.max(65);
            let (la, lb) = (a.ln(), b.ln());
            let mut nodes: Vec<f64> = (0..n)
                .map(|j| (la + (lb - la) * j as f64 / (n - 1) as f64).exp())
                .collect();
            nodes[0] = a;
            nodes[n - 1] = b;
            nodes
        } else {
            let n = 2 * self.grid_nodes.max(65) - 1;
            let span = self.decades * std::f64::consts::LN_10;
            let la = a.ln();
            let mut nodes: Vec<f64> = (0..n)
                .map(|j| (la + span * j as f64 / (n - 1) as f64).exp())
                .collect();
            nodes[0] = a;
            nodes.push(f64::INFINITY);
            nodes
        }
    }

    /// Supremum of `objective` over `domain`.
    pub fn maximize<F>(
        &self,
        objective: F,
        domain: &Interval,
    ) -> Result<SupSearchResult, CalculusError>
    where
        F: Fn(f64) -> f64,
    {
        if !(self.tol > 0.0) {
            return Err(CalculusError::BadTolerance(self.tol));
        }
        let nodes = self.nodes(domain);
        let last = nodes.len() - 1;
        let mut values = Vec::with_capacity(nodes.len());
        for (j, &p) in nodes.iter().enumerate() {
            let v = objective(p);
            if v.is_nan() {
                if j == 0 || j == last {
                    values.push(f64::NEG_INFINITY);
                    continue;
                }
                return Err(CalculusError::NonFiniteObjective { p });
            }
            values.push(v);
        }

        let mut best = 0;
        for j in 1..=last {
            if values[j] > values[best] {
                best = j;
            }
        }
        let at_endpoint = |j: usize| j == 0 || j == last;
        if values[best] == f64::INFINITY || values[best] == f64::NEG_INFINITY {
            return Ok(SupSearchResult {
                value: values[best],
                arg: nodes[best],
                iterations: 0,
                converged: true,
                attained: !at_endpoint(best),
            });
        }

        let lo = best.saturating_sub(1);
        let hi = (best + 1).min(last);
        let coord = if nodes[hi].is_infinite() {
            Coord::InvP
        } else {
            Coord::LogP
        };
        let (mut x_lo, mut x_hi) = match coord {
            Coord::LogP => (nodes[lo].ln(), nodes[hi].ln()),
            Coord::InvP => (0.0, 1.0 / nodes[lo]),
        };
        // bracket width scale at which refinement stops
        let stop = match coord {
            Coord::LogP => self.tol,
            Coord::InvP => self.tol * x_hi,
        };
        let eval = |x: f64| -> Result<f64, CalculusError> {
            let p = coord.to_p(x);
            let v = objective(p);
            if v.is_nan() {
                Err(CalculusError::NonFiniteObjective { p })
            } else {
                Ok(v)
            }
        };

        let mut c = x_hi - INV_PHI * (x_hi - x_lo);
        let mut d = x_lo + INV_PHI * (x_hi - x_lo);
        let mut fc = eval(c)?;
        let mut fd = eval(d)?;
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            if x_hi - x_lo <= stop {
                converged = true;
                break;
            }
            if fc >= fd {
                x_hi = d;
                d = c;
                fd = fc;
                c = x_hi - INV_PHI * (x_hi - x_lo);
                fc = eval(c)?;
            } else {
                x_lo = c;
                c = d;
                fc = fd;
                d = x_lo + INV_PHI * (x_hi - x_lo);
                fd = eval(d)?;
            }
            iterations += 1;
        }
        let (x_star, f_star) = if fc >= fd { (c, fc) } else { (d, fd) };

        let mut value = values[best];
        let mut arg = nodes[best];
        let mut from_grid = true;
        for j in lo..=hi {
            if values[j] > value {
                value = values[j];
                arg = nodes[j];
            }
        }
        if f_star > value {
            value = f_star;
            arg = coord.to_p(x_star);
            from_grid = false;
        }

        // A refined maximizer hugging an open endpoint is a limit, not an attained point.
        let lower_limit = if from_grid {
            arg == nodes[0]
        } else {
            lo == 0 && (coord.of_p(arg) - coord.of_p(nodes[0])).abs() <= stop
        };
        let upper_limit = if from_grid {
            arg == nodes[last]
        } else {
            hi == last && (coord.of_p(nodes[last]) - coord.of_p(arg)).abs() <= stop
        };
        let attained = !(lower_limit || upper_limit);
        if lower_limit {
            arg = nodes[0];
        } else if upper_limit {
            arg = nodes[last];
        }

        Ok(SupSearchResult {
            value,
            arg,
            iterations,
            converged,
            attained,
        })
    }
}

/// `sup_{p ∈ domain} objective(p)` with the default engine at tolerance `tol`.
pub fn sup_over_interval<F>(
    objective: F,
    domain: &Interval,
    tol: f64,
) -> Result<SupSearchResult, CalculusError>
where
    F: Fn(f64) -> f64,
{
    SupSearch::with_tol(tol).maximize(objective, domain)
}
