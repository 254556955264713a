//! Exact Laplace–Beltrami eigenfunctions on model manifolds.
//!
//! Two manifolds with closed-form, L²-normalized eigenfunctions
//! (`−Δ e = λ² e`, `‖e‖₂ = 1`):
//!
//! - the unit sphere `S²` (volume `4π`), degree `k`, `λ = √(k(k+1))`:
//!   the zonal harmonic `Y_k^0 ∝ P_k(cos θ)` and the highest-weight harmonic
//!   `|Y_k^k| ∝ sin^k θ`;
//! - the flat torus `T² = [0, 2π)²` (volume `4π²`), `e^{i n·x}/(2π)` with
//!   `λ = |n|`.
//!
//! The modulus of every implemented eigenfunction depends on one grid
//! coordinate only (`cos θ`, or nothing at all on the torus), which is what
//! lets [`QuadratureGrid::sample_rows`] collapse the azimuthal sum.

mod harmonics;
mod norms;
mod quadrature;

pub use harmonics::{
    legendre_p, wallis_odd, EigenDescriptor, HarmonicKind, SphereHarmonic, TorusWave,
};
pub use norms::{p_norm, p_norm_curve, p_norm_curve_on_grid, sup_norm, NormConfig};
pub use quadrature::{gauss_legendre, GridDescriptor, QuadratureGrid};

use crate::calculus::CalculusError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ManifoldError {
    #[error("BadResolution: {0}")]
    BadResolution(String),
    #[error("BadDegree: {0}")]
    BadDegree(String),
    #[error("BadExponent: p = {0} must be at least 1")]
    BadExponent(f64),
    #[error("NoConvergence: p = {p}: relative change {change:e} at order {order} exceeds {tol:e}")]
    NoConvergence {
        p: f64,
        order: usize,
        change: f64,
        tol: f64,
    },
    #[error("ManifoldMismatch: eigenfunction and grid live on different manifolds")]
    ManifoldMismatch,
    #[error("Io: {0}")]
    Io(String),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    Sphere,
    Torus,
}

impl Manifold {
    /// Riemannian volume.
    pub fn volume(&self) -> f64 {
        use std::f64::consts::PI;
        match self {
            Manifold::Sphere => 4.0 * PI,
            Manifold::Torus => 4.0 * PI * PI,
        }
    }
}

/// A point of `S²` (by `cos θ` and azimuth) or of `T²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Sphere { cos_theta: f64, phi: f64 },
    Torus { x: f64, y: f64 },
}

impl Point {
    /// Sphere point from colatitude `θ` and azimuth `φ`.
    pub fn sphere(theta: f64, phi: f64) -> Self {
        Point::Sphere {
            cos_theta: theta.cos(),
            phi,
        }
    }

    pub fn sphere_from_cos(cos_theta: f64, phi: f64) -> Self {
        Point::Sphere { cos_theta, phi }
    }
}

/// Any implemented eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub enum Eigenfunction {
    Sphere(SphereHarmonic),
    Torus(TorusWave),
}

impl Eigenfunction {
    pub fn zonal(k: u32) -> Result<Self, ManifoldError> {
        Ok(Eigenfunction::Sphere(SphereHarmonic::new(
            k,
            HarmonicKind::Zonal,
        )?))
    }

    pub fn highest_weight(k: u32) -> Result<Self, ManifoldError> {
        Ok(Eigenfunction::Sphere(SphereHarmonic::new(
            k,
            HarmonicKind::HighestWeight,
        )?))
    }

    pub fn torus(n: (i32, i32)) -> Result<Self, ManifoldError> {
        Ok(Eigenfunction::Torus(TorusWave::new(n)?))
    }

    pub fn manifold(&self) -> Manifold {
        match self {
            Eigenfunction::Sphere(_) => Manifold::Sphere,
            Eigenfunction::Torus(_) => Manifold::Torus,
        }
    }

    /// Frequency `λ` of `−Δ e = λ² e`.
    pub fn lambda(&self) -> f64 {
        match self {
            Eigenfunction::Sphere(h) => h.lambda(),
            Eigenfunction::Torus(t) => t.lambda(),
        }
    }

    /// Value at `point`: signed for zonal harmonics, the modulus otherwise.
    /// Points on the other manifold evaluate to NaN.
    pub fn eval(&self, point: &Point) -> f64 {
        match (self, point) {
            (Eigenfunction::Sphere(h), Point::Sphere { cos_theta, .. }) => h.eval_cos(*cos_theta),
            (Eigenfunction::Torus(t), Point::Torus { .. }) => t.modulus(),
            _ => f64::NAN,
        }
    }

    /// Value as a function of the grid row coordinate alone.
    pub(crate) fn row_profile(&self, row: f64) -> f64 {
        match self {
            Eigenfunction::Sphere(h) => h.eval_cos(row),
            Eigenfunction::Torus(t) => t.modulus(),
        }
    }

    /// `max |e|`, in closed form.
    pub fn sup_norm(&self) -> f64 {
        match self {
            Eigenfunction::Sphere(h) => h.norm_const(),
            Eigenfunction::Torus(t) => t.modulus(),
        }
    }

    pub fn descriptor(&self) -> EigenDescriptor {
        match self {
            Eigenfunction::Sphere(h) => EigenDescriptor {
                manifold: Manifold::Sphere,
                kind: match h.kind() {
                    HarmonicKind::Zonal => "zonal".into(),
                    HarmonicKind::HighestWeight => "highest_weight".into(),
                },
                k: Some(h.degree()),
                n: None,
            },
            Eigenfunction::Torus(t) => EigenDescriptor {
                manifold: Manifold::Torus,
                kind: "wave".into(),
                k: None,
                n: Some([t.frequency().0, t.frequency().1]),
            },
        }
    }

    /// Short label such as `zonal:k=8` or `torus:n=(3,4)`.
    pub fn label(&self) -> String {
        match self {
            Eigenfunction::Sphere(h) => match h.kind() {
                HarmonicKind::Zonal => format!("zonal:k={}", h.degree()),
                HarmonicKind::HighestWeight => format!("highest_weight:k={}", h.degree()),
            },
            Eigenfunction::Torus(t) => format!("torus:n=({},{})", t.frequency().0, t.frequency().1),
        }
    }
}

impl TryFrom<&EigenDescriptor> for Eigenfunction {
    type Error = ManifoldError;

    fn try_from(d: &EigenDescriptor) -> Result<Self, Self::Error> {
        match (d.manifold, d.kind.as_str(), d.k, d.n) {
            (Manifold::Sphere, "zonal", Some(k), None) => Eigenfunction::zonal(k),
            (Manifold::Sphere, "highest_weight", Some(k), None) => Eigenfunction::highest_weight(k),
            (Manifold::Torus, "wave", None, Some([a, b])) => Eigenfunction::torus((a, b)),
            _ => Err(ManifoldError::BadDegree(format!(
                "unsupported descriptor {d:?}"
            ))),
        }
    }
}
