use std::f64::consts::PI;

use super::{gauss_legendre, Manifold, ManifoldError};

/// Legendre polynomial `P_k(x)` by the upward three-term recurrence.
pub fn legendre_p(k: u32, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Wallis integral `W(k) = ∫₀^π sin^{2k+1}θ dθ`, via `W(k) = W(k−1)·2k/(2k+1)`, `W(0) = 2`.
pub fn wallis_odd(k: u32) -> f64 {
    (1..=k).fold(2.0, |w, j| w * (2.0 * j as f64) / (2.0 * j as f64 + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicKind {
    /// `m = 0`: `√((2k+1)/(4π)) P_k(cos θ)`.
    Zonal,
    /// `m = k`: modulus `c_k sin^k θ`.
    HighestWeight,
}

/// An L²-normalized spherical harmonic of degree `k ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereHarmonic {
    degree: u32,
    kind: HarmonicKind,
    lambda: f64,
    norm_const: f64,
}

impl SphereHarmonic {
    pub fn new(degree: u32, kind: HarmonicKind) -> Result<Self, ManifoldError> {
        if degree < 1 {
            return Err(ManifoldError::BadDegree(
                "spherical harmonic degree must be at least 1".into(),
            ));
        }
        let k = degree as f64;
        let norm_const = match kind {
            HarmonicKind::Zonal => ((2.0 * k + 1.0) / (4.0 * PI)).sqrt(),
            // c² · 2π · W(k) = 1
            HarmonicKind::HighestWeight => 1.0 / (2.0 * PI * wallis_odd(degree)).sqrt(),
        };
        Ok(SphereHarmonic {
            degree,
            kind,
            lambda: (k * (k + 1.0)).sqrt(),
            norm_const,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn kind(&self) -> HarmonicKind {
        self.kind
    }

    /// `√(k(k+1))`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// Value at colatitude with cosine `x` (modulus for the highest weight).
    pub fn eval_cos(&self, x: f64) -> f64 {
        match self.kind {
            HarmonicKind::Zonal => self.norm_const * legendre_p(self.degree, x),
            HarmonicKind::HighestWeight => {
                // sin²θ = (1−x)(1+x) avoids cancellation near the poles; ln 0 = −∞ gives 0
                let sin2 = ((1.0 - x) * (1.0 + x)).max(0.0);
                self.norm_const * (0.5 * self.degree as f64 * sin2.ln()).exp()
            }
        }
    }

    /// Zeros of the `cos θ` profile inside `(-1, 1)`: the roots of `P_k` for
    /// zonal harmonics, none for the highest weight.
    pub fn nodal_cosines(&self) -> Vec<f64> {
        match self.kind {
            HarmonicKind::Zonal => gauss_legendre(self.degree as usize).0,
            HarmonicKind::HighestWeight => Vec::new(),
        }
    }
}

/// `e^{i n·x}/(2π)` on `T² = [0, 2π)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusWave {
    frequency: (i32, i32),
    lambda: f64,
}

impl TorusWave {
    pub fn new(frequency: (i32, i32)) -> Result<Self, ManifoldError> {
        if frequency == (0, 0) {
            return Err(ManifoldError::BadDegree(
                "torus frequency must be non-zero".into(),
            ));
        }
        let (a, b) = (frequency.0 as f64, frequency.1 as f64);
        Ok(TorusWave {
            frequency,
            lambda: a.hypot(b),
        })
    }

    pub fn frequency(&self) -> (i32, i32) {
        self.frequency
    }

    /// `|n|`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The constant modulus `1/(2π)`.
    pub fn modulus(&self) -> f64 {
        1.0 / (2.0 * PI)
    }
}

/// JSON form `{manifold, kind, k | n}` of an eigenfunction.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EigenDescriptor {
    pub manifold: Manifold,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<[i32; 2]>,
}

#[cfg(test)]
mod tests {
    use super::super::{Eigenfunction, Point};
    use super::*;

    #[test]
    fn legendre_small_degrees() {
        let x = 0.3;
        assert_eq!(legendre_p(0, x), 1.0);
        assert_eq!(legendre_p(1, x), x);
        assert!((legendre_p(2, x) - (3.0 * x * x - 1.0) / 2.0).abs() < 1e-16);
        assert!((legendre_p(3, x) - (5.0 * x * x * x - 3.0 * x) / 2.0).abs() < 1e-16);
        for k in [1, 7, 64, 500] {
            assert!((legendre_p(k, 1.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wallis_values() {
        assert_eq!(wallis_odd(0), 2.0);
        assert!((wallis_odd(1) - 4.0 / 3.0).abs() < 1e-16);
        assert!((wallis_odd(2) - 16.0 / 15.0).abs() < 1e-16);
    }

    #[test]
    fn pointwise_examples() {
        let z = Eigenfunction::zonal(9).unwrap();
        assert!((z.eval(&Point::sphere(0.0, 1.0)) - (19.0 / (4.0 * PI)).sqrt()).abs() < 1e-14);

        let h = Eigenfunction::highest_weight(12).unwrap();
        assert_eq!(h.eval(&Point::sphere_from_cos(0.0, 0.3)), h.sup_norm());
        assert!((h.eval(&Point::sphere(PI / 2.0, 0.3)) - h.sup_norm()).abs() < 1e-14);
        assert_eq!(h.eval(&Point::sphere_from_cos(1.0, 0.0)), 0.0);

        let z2 = Eigenfunction::zonal(2).unwrap();
        assert!(
            z2.eval(&Point::sphere_from_cos(1.0 / 3f64.sqrt(), 0.0))
                .abs()
                < 1e-16
        );

        let t = Eigenfunction::torus((3, -4)).unwrap();
        assert_eq!(t.lambda(), 5.0);
        assert!(t.eval(&Point::sphere(0.1, 0.1)).is_nan());
    }

    #[test]
    fn sup_norms() {
        let z = Eigenfunction::zonal(10).unwrap();
        assert!((z.sup_norm() - 1.2927207364566027).abs() < 1e-15);
        let t = Eigenfunction::torus((1, 0)).unwrap();
        assert!((t.sup_norm() - 0.15915494309189535).abs() < 1e-16);
        let h = Eigenfunction::highest_weight(1).unwrap();
        assert!((h.sup_norm() - 0.3454941494713355).abs() < 1e-15);
    }

    #[test]
    fn sup_norm_dominates_dense_sampling() {
        for e in [
            Eigenfunction::zonal(10).unwrap(),
            Eigenfunction::highest_weight(7).unwrap(),
        ] {
            let dense = (0..=20000)
                .map(|i| e.eval(&Point::sphere(PI * i as f64 / 20000.0, 0.0)).abs())
                .fold(0.0, f64::max);
            assert!(dense <= e.sup_norm() * (1.0 + 1e-14));
            assert!(dense >= e.sup_norm() * (1.0 - 1e-8));
        }
    }

    #[test]
    fn highest_weight_does_not_underflow_to_nan() {
        let h = SphereHarmonic::new(4000, HarmonicKind::HighestWeight).unwrap();
        let v = h.eval_cos(0.9999);
        assert!(v >= 0.0 && v.is_finite());
    }

    #[test]
    fn degree_and_frequency_validation() {
        assert!(Eigenfunction::zonal(0).is_err());
        assert!(Eigenfunction::torus((0, 0)).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        for e in [
            Eigenfunction::zonal(8).unwrap(),
            Eigenfunction::highest_weight(3).unwrap(),
            Eigenfunction::torus((2, 5)).unwrap(),
        ] {
            let d = e.descriptor();
            assert_eq!(Eigenfunction::try_from(&d).unwrap(), e);
        }
    }
}
