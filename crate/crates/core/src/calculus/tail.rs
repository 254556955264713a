use std::io::Write;

use super::CalculusError;
use crate::format::format_sig;

/// Function values on a discrete measure: `f(x_i)` with weights `w_i > 0`.
///
/// Produced by sampling on a quadrature grid; every quantity computed from it
/// (tails, moment generating functions) is exact for the discrete measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredFunction {
    values: Vec<f64>,
    weights: Vec<f64>,
    total: f64,
}

impl MeasuredFunction {
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self, CalculusError> {
        if values.is_empty() {
            return Err(CalculusError::EmptyGrid);
        }
        if values.len() != weights.len() {
            return Err(CalculusError::BadGrid(format!(
                "{} values against {} weights",
                values.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(CalculusError::BadGrid(format!(
                "weight {w} is not positive"
            )));
        }
        if let Some(v) = values.iter().find(|v| v.is_nan()) {
            return Err(CalculusError::BadGrid(format!("value {v} is not a number")));
        }
        let total = weights.iter().sum();
        Ok(MeasuredFunction {
            values,
            weights,
            total,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total mass of the measure.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// `(Σ w_i |f_i|^p)^{1/p}`, scaled by `max |f|` to stay in range.
    pub fn p_norm(&self, p: f64) -> f64 {
        let peak = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if p.is_infinite() || peak == 0.0 {
            return peak;
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| w * (v.abs() / peak).powf(p))
            .sum();
        peak * sum.powf(1.0 / p)
    }
}

/// One row of a tail table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailPoint {
    pub u: f64,
    /// Measure of `{|f| > u}`.
    pub tail: f64,
    /// Optional upper bound for `tail`.
    pub bound: Option<f64>,
}

/// Tail function `T[f](u)` on increasing levels.
#[derive(Debug, Clone, PartialEq)]
pub struct TailCurve {
    pub points: Vec<TailPoint>,
}

impl TailCurve {
    /// Writes `u,T,bound` rows with 17 significant digits; a missing bound is empty.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), CalculusError> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| CalculusError::Csv(e.to_string());
        w.write_record(["u", "T", "bound"]).map_err(io)?;
        for pt in &self.points {
            let bound = pt.bound.map(|b| format_sig(b, 17)).unwrap_or_default();
            w.write_record([format_sig(pt.u, 17), format_sig(pt.tail, 17), bound])
                .map_err(io)?;
        }
        w.flush().map_err(|e| CalculusError::Csv(e.to_string()))
    }

    /// Levels where the tail exceeds `bound·(1+rel)`.
    pub fn violations(&self, rel: f64) -> Vec<TailPoint> {
        self.points
            .iter()
            .filter(|pt| pt.bound.is_some_and(|b| pt.tail > b * (1.0 + rel)))
            .copied()
            .collect()
    }
}

/// `T[f](u) = Σ { w_i : |f_i| > u }` for each level, sorted ascending.
pub fn empirical_tail(f: &MeasuredFunction, levels: &[f64]) -> Result<TailCurve, CalculusError> {
    if let Some(u) = levels.iter().find(|u| !(**u > 0.0)) {
        return Err(CalculusError::BadLevel(*u));
    }
    let mut order: Vec<usize> = (0..f.values.len()).collect();
    order.sort_by(|&i, &j| f.values[j].abs().total_cmp(&f.values[i].abs()));
    let sorted: Vec<f64> = order.iter().map(|&i| f.values[i].abs()).collect();
    // mass[j] = weight of the j largest |f| values
    let mut mass = Vec::with_capacity(sorted.len() + 1);
    mass.push(0.0);
    let mut acc = 0.0;
    for &i in &order {
        acc += f.weights[i];
        mass.push(acc);
    }

    let mut us = levels.to_vec();
    us.sort_by(f64::total_cmp);
    let points = us
        .into_iter()
        .map(|u| {
            let above = sorted.partition_point(|&v| v > u);
            TailPoint {
                u,
                tail: mass[above],
                bound: None,
            }
        })
        .collect();
    Ok(TailCurve { points })
}

/// `ν[f](z) = Σ w_i exp(z f_i)`, with the largest exponent factored out.
pub fn moment_generating(f: &MeasuredFunction, z: f64) -> Result<f64, CalculusError> {
    if !z.is_finite() {
        return Err(CalculusError::BadArgument(format!(
            "z = {z} must be finite"
        )));
    }
    let shift = f
        .values
        .iter()
        .map(|v| z * v)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = f
        .values
        .iter()
        .zip(&f.weights)
        .map(|(v, w)| w * (z * v - shift).exp())
        .sum();
    let log_value = shift + sum.ln();
    let value = log_value.exp();
    if !value.is_finite() {
        return Err(CalculusError::Overflow { z, log_value });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step() -> MeasuredFunction {
        MeasuredFunction::new(vec![0.5, -2.0, 1.0, 3.0], vec![1.0, 0.5, 2.0, 0.25]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            MeasuredFunction::new(vec![], vec![]),
            Err(CalculusError::EmptyGrid)
        ));
        assert!(MeasuredFunction::new(vec![1.0], vec![0.0]).is_err());
        assert!(MeasuredFunction::new(vec![1.0, 2.0], vec![1.0]).is_err());
    }

    #[test]
    fn tail_counts_strict_exceedance() {
        let t = empirical_tail(&step(), &[2.0, 0.1, 1.0, 5.0]).unwrap();
        let got: Vec<(f64, f64)> = t.points.iter().map(|p| (p.u, p.tail)).collect();
        assert_eq!(got, vec![(0.1, 3.75), (1.0, 0.75), (2.0, 0.25), (5.0, 0.0)]);
        assert!(matches!(
            empirical_tail(&step(), &[0.0]),
            Err(CalculusError::BadLevel(_))
        ));
    }

    #[test]
    fn mgf_at_zero_is_total_mass() {
        let f = step();
        assert!((moment_generating(&f, 0.0).unwrap() - 3.75).abs() < 1e-15);
        let direct: f64 = f
            .values()
            .iter()
            .zip(f.weights())
            .map(|(v, w)| w * (0.7 * v).exp())
            .sum();
        assert!((moment_generating(&f, 0.7).unwrap() - direct).abs() < 1e-13 * direct);
    }

    #[test]
    fn mgf_overflow_is_reported() {
        let f = MeasuredFunction::new(vec![1.0], vec![1.0]).unwrap();
        assert!(matches!(
            moment_generating(&f, 800.0),
            Err(CalculusError::Overflow { .. })
        ));
        // shifted sum keeps large-but-representable results exact
        let v = moment_generating(&f, 700.0).unwrap();
        assert!((v.ln() - 700.0).abs() < 1e-12);
    }

    #[test]
    fn csv_export() {
        let mut t = empirical_tail(&step(), &[1.0]).unwrap();
        t.points[0].bound = Some(0.8);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "u,T,bound\n1,0.75,0.80000000000000004\n"
        );
    }
}
