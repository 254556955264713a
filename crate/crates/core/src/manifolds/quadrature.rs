//! Gauss–Legendre rules and tensor quadrature grids on `S²` and `T²`.

use std::f64::consts::PI;
use std::io::Write;

use super::{Eigenfunction, Manifold, ManifoldError, Point};
use crate::calculus::MeasuredFunction;
use crate::format::format_sig;

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
///
/// Roots of `P_n` by Newton iteration from the Tricomi initial guess, with
/// `P_n` and `P_n'` from the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the upward recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Resolution parameters of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridDescriptor {
    pub manifold: Manifold,
    /// Gauss order per panel on the sphere; points per axis on the torus.
    pub order: usize,
    pub panels: usize,
    pub rows: usize,
    pub columns: usize,
}

/// Tensor-product quadrature: rows × columns with positive weights.
///
/// Sphere: rows are `cos θ` nodes of a (possibly composite) Gauss–Legendre rule,
/// columns `2·rows` uniform azimuths. Torus: `n × n` uniform points. Column
/// weights always sum to `2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    manifold: Manifold,
    rows: Vec<f64>,
    row_weights: Vec<f64>,
    columns: usize,
    order: usize,
    panels: usize,
}

impl QuadratureGrid {
    /// Gauss–Legendre in `cos θ` (order `n`) tensor `2n` azimuths. Exact for
    /// spherical polynomials of degree `≤ 2n − 1`.
    pub fn sphere(n: usize) -> Result<Self, ManifoldError> {
        if n < 2 {
            return Err(ManifoldError::BadResolution(format!(
                "sphere grid needs N >= 2, got {n}"
            )));
        }
        let (rows, row_weights) = gauss_legendre(n);
        Ok(QuadratureGrid {
            manifold: Manifold::Sphere,
            columns: 2 * n,
            rows,
            row_weights,
            order: n,
            panels: 1,
        })
    }

    /// Composite Gauss–Legendre in `cos θ` with panels split at `breaks`
    /// (strictly inside `(-1, 1)`, ascending), `order` nodes per panel.
    pub fn sphere_split(order: usize, breaks: &[f64]) -> Result<Self, ManifoldError> {
        if order < 2 {
            return Err(ManifoldError::BadResolution(format!(
                "panel order must be >= 2, got {order}"
            )));
        }
        let mut edges = Vec::with_capacity(breaks.len() + 2);
        edges.push(-1.0);
        edges.extend_from_slice(breaks);
        edges.push(1.0);
        if edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(ManifoldError::BadResolution(
                "panel breaks must increase inside (-1, 1)".into(),
            ));
        }
        let (t, w) = gauss_legendre(order);
        let panels = edges.len() - 1;
        let mut rows = Vec::with_capacity(panels * order);
        let mut row_weights = Vec::with_capacity(panels * order);
        for e in edges.windows(2) {
            let half = 0.5 * (e[1] - e[0]);
            let mid = 0.5 * (e[1] + e[0]);
            for (ti, wi) in t.iter().zip(&w) {
                rows.push(mid + half * ti);
                row_weights.push(half * wi);
            }
        }
        let columns = 2 * rows.len();
        Ok(QuadratureGrid {
            manifold: Manifold::Sphere,
            rows,
            row_weights,
            columns,
            order,
            panels,
        })
    }

    /// `n × n` uniform grid on `[0, 2π)²`; exact for trigonometric
    /// polynomials of degree `< n` in each variable.
    pub fn torus(n: usize) -> Result<Self, ManifoldError> {
        if n < 1 {
            return Err(ManifoldError::BadResolution(
                "torus grid needs n >= 1".into(),
            ));
        }
        let h = 2.0 * PI / n as f64;
        Ok(QuadratureGrid {
            manifold: Manifold::Torus,
            rows: (0..n).map(|i| i as f64 * h).collect(),
            row_weights: vec![h; n],
            columns: n,
            order: n,
            panels: 1,
        })
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor {
            manifold: self.manifold,
            order: self.order,
            panels: self.panels,
            rows: self.rows.len(),
            columns: self.columns,
        }
    }

    /// Row coordinates: `cos θ` on the sphere, `x` on the torus.
    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    pub fn row_weights(&self) -> &[f64] {
        &self.row_weights
    }

    fn column_coord(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.columns as f64
    }

    fn column_weight(&self) -> f64 {
        2.0 * PI / self.columns as f64
    }

    /// Sum of all weights (exactly `Σ row weights · 2π`).
    pub fn total(&self) -> f64 {
        self.row_weights.iter().sum::<f64>() * 2.0 * PI
    }

    pub fn len(&self) -> usize {
        self.rows.len() * self.columns
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every node with its weight, row-major.
    pub fn nodes(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        let cw = self.column_weight();
        self.rows
            .iter()
            .zip(&self.row_weights)
            .flat_map(move |(&r, &rw)| {
                (0..self.columns).map(move |j| {
                    let c = self.column_coord(j);
                    let point = match self.manifold {
                        Manifold::Sphere => Point::sphere_from_cos(r, c),
                        Manifold::Torus => Point::Torus { x: r, y: c },
                    };
                    (point, rw * cw)
                })
            })
    }

    /// Samples an arbitrary function at every node.
    pub fn sample(&self, f: impl Fn(&Point) -> f64) -> Result<MeasuredFunction, ManifoldError> {
        let (values, weights) = self.nodes().map(|(pt, w)| (f(&pt), w)).unzip();
        Ok(MeasuredFunction::new(values, weights)?)
    }

    /// Samples an eigenfunction whose modulus depends on the row coordinate
    /// only, collapsing each row to one node of weight `row weight · 2π`.
    /// Every tail, norm and moment of `|e|` is unchanged by the collapse.
    pub fn sample_rows(&self, e: &Eigenfunction) -> Result<MeasuredFunction, ManifoldError> {
        if e.manifold() != self.manifold {
            return Err(ManifoldError::ManifoldMismatch);
        }
        let values = self.rows.iter().map(|&r| e.row_profile(r)).collect();
        let weights = self.row_weights.iter().map(|w| w * 2.0 * PI).collect();
        Ok(MeasuredFunction::new(values, weights)?)
    }

    /// Discrete `‖e‖_p` on this grid.
    pub fn p_norm(&self, e: &Eigenfunction, p: f64) -> Result<f64, ManifoldError> {
        Ok(self.sample_rows(e)?.p_norm(p))
    }

    /// Writes every node as `theta,phi,weight` (sphere) or `x,y,weight` (torus).
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), ManifoldError> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| ManifoldError::Io(e.to_string());
        match self.manifold {
            Manifold::Sphere => w.write_record(["theta", "phi", "weight"]).map_err(io)?,
            Manifold::Torus => w.write_record(["x", "y", "weight"]).map_err(io)?,
        }
        for (pt, weight) in self.nodes() {
            let (a, b) = match pt {
                Point::Sphere { cos_theta, phi } => (cos_theta.acos(), phi),
                Point::Torus { x, y } => (x, y),
            };
            w.write_record([format_sig(a, 17), format_sig(b, 17), format_sig(weight, 17)])
                .map_err(io)?;
        }
        w.flush().map_err(|e| ManifoldError::Io(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_legendre_roots() {
        let (x, w) = gauss_legendre(3);
        let r = (0.6f64).sqrt();
        assert!((x[0] + r).abs() < 1e-15 && x[1] == 0.0 && (x[2] - r).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15 && (w[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn roots_are_roots() {
        for n in [2, 7, 32, 101] {
            let (x, w) = gauss_legendre(n);
            for xi in &x {
                assert!(legendre_with_derivative(n, *xi).0.abs() < 1e-13, "n = {n}");
            }
            assert!(x.windows(2).all(|p| p[1] > p[0]));
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn large_order_weight_sum() {
        let (_, w) = gauss_legendre(4096);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_exactness() {
        // ∫ x^{2m} dx = 2/(2m+1), exact up to degree 2n−1
        let n = 9;
        let (x, w) = gauss_legendre(n);
        for m in 0..n {
            let q: f64 = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| wi * xi.powi(2 * m as i32))
                .sum();
            assert!(
                (q - 2.0 / (2 * m + 1) as f64).abs() < 1e-14,
                "degree {}",
                2 * m
            );
        }
    }

    #[test]
    fn sphere_grid_shape_and_total() {
        let g = QuadratureGrid::sphere(2).unwrap();
        assert_eq!((g.rows().len(), g.descriptor().columns), (2, 4));
        assert_eq!(g.len(), 8);
        let total: f64 = g.nodes().map(|(_, w)| w).sum();
        assert!((total - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
        assert!((g.total() - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
        assert!(matches!(
            QuadratureGrid::sphere(1),
            Err(ManifoldError::BadResolution(_))
        ));
    }

    #[test]
    fn split_grid_total() {
        let g = QuadratureGrid::sphere_split(5, &[-0.3, 0.1, 0.8]).unwrap();
        assert_eq!(g.descriptor().panels, 4);
        assert!((g.total() - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
        assert!(QuadratureGrid::sphere_split(5, &[0.3, 0.1]).is_err());
        assert!(QuadratureGrid::sphere_split(5, &[1.0]).is_err());
    }

    #[test]
    fn torus_grid_total() {
        let g = QuadratureGrid::torus(16).unwrap();
        assert!((g.total() - 4.0 * PI * PI).abs() < 1e-12 * 4.0 * PI * PI);
        let total: f64 = g.nodes().map(|(_, w)| w).sum();
        assert!((total - 4.0 * PI * PI).abs() < 1e-12 * 4.0 * PI * PI);
    }

    #[test]
    fn csv_export_has_one_row_per_node() {
        let g = QuadratureGrid::sphere(2).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + g.len());
        assert!(text.starts_with("theta,phi,weight\n"));
    }
}
