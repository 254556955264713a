use std::io::{Read, Write};

use super::CalculusError;
use crate::format::{format_sig, parse_real};
use crate::psi::Interval;

/// Sampled map `p ↦ ‖f‖_p` for one function `f`.
///
/// Samples are strictly increasing in `p`; the last one may sit at `p = +∞`
/// (the sup-norm). Between samples `ln ‖f‖_p` is interpolated linearly in
/// `1/p`, which is exact for curves of the form `A·B^{1/p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PNormCurve {
    samples: Vec<(f64, f64)>,
    source: String,
}

impl PNormCurve {
    pub fn new(samples: Vec<(f64, f64)>, source: impl Into<String>) -> Result<Self, CalculusError> {
        if samples.is_empty() {
            return Err(CalculusError::BadCurve("no samples".into()));
        }
        for &(p, v) in &samples {
            if !(p > 0.0) {
                return Err(CalculusError::BadCurve(format!("p = {p} must be positive")));
            }
            if !(v >= 0.0 && v.is_finite()) {
                return Err(CalculusError::BadCurve(format!(
                    "norm {v} at p = {p} must be finite and non-negative"
                )));
            }
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(CalculusError::BadCurve(format!(
                    "p must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(PNormCurve {
            samples,
            source: source.into(),
        })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Descriptor of the underlying function and measure.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn first_p(&self) -> f64 {
        self.samples[0].0
    }

    pub fn last_p(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    /// Whether every `p` in the closure of `domain` is inside the sampled range.
    pub fn covers(&self, domain: &Interval) -> bool {
        self.first_p() <= domain.lower() && self.last_p() >= domain.upper()
    }

    /// Interpolated `ln ‖f‖_p`; `None` outside the sampled range.
    pub fn ln_at(&self, p: f64) -> Option<f64> {
        if !(p >= self.first_p() && p <= self.last_p()) {
            return None;
        }
        let i = self.samples.partition_point(|&(q, _)| q <= p) - 1;
        let (p0, v0) = self.samples[i];
        if p0 == p || i + 1 == self.samples.len() {
            return Some(v0.ln());
        }
        let (p1, v1) = self.samples[i + 1];
        if v0 == 0.0 || v1 == 0.0 {
            return Some(f64::NEG_INFINITY);
        }
        let (s0, s1, s) = (1.0 / p0, 1.0 / p1, 1.0 / p);
        let t = (s0 - s) / (s0 - s1);
        let (l0, l1) = (v0.ln(), v1.ln());
        Some(l0 + t * (l1 - l0))
    }

    /// Interpolated `‖f‖_p`; exact at sample points.
    pub fn value_at(&self, p: f64) -> Option<f64> {
        if let Ok(i) = self.samples.binary_search_by(|&(q, _)| q.total_cmp(&p)) {
            return Some(self.samples[i].1);
        }
        self.ln_at(p).map(f64::exp)
    }

    /// The curve of `c·f`.
    pub fn scaled(&self, c: f64) -> Result<PNormCurve, CalculusError> {
        PNormCurve::new(
            self.samples.iter().map(|&(p, v)| (p, c * v)).collect(),
            format!("{}*{}", format_sig(c, 12), self.source),
        )
    }

    /// Checks that `ln ‖f‖_p` is convex in `1/p` (Lyapunov interpolation):
    /// every interior sample lies on or below the chord of its neighbours,
    /// up to `slack`.
    pub fn is_log_convex(&self, slack: f64) -> bool {
        self.samples.windows(3).all(|w| {
            let (s0, s1, s2) = (1.0 / w[0].0, 1.0 / w[1].0, 1.0 / w[2].0);
            let (l0, l1, l2) = (w[0].1.ln(), w[1].1.ln(), w[2].1.ln());
            let t = (s0 - s1) / (s0 - s2);
            l1 <= l0 + t * (l2 - l0) + slack
        })
    }

    /// Writes `p,norm` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), CalculusError> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| CalculusError::Csv(e.to_string());
        w.write_record(["p", "norm"]).map_err(io)?;
        for &(p, v) in &self.samples {
            w.write_record([format_sig(p, 17), format_sig(v, 17)])
                .map_err(io)?;
        }
        w.flush().map_err(|e| CalculusError::Csv(e.to_string()))
    }

    /// Reads `p,norm` rows; `p` may be `inf`.
    pub fn read_csv<R: Read>(reader: R, source: impl Into<String>) -> Result<Self, CalculusError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| CalculusError::Csv(e.to_string()))?;
        if headers.len() != 2 || &headers[0] != "p" || &headers[1] != "norm" {
            return Err(CalculusError::Csv("expected header `p,norm`".into()));
        }
        let mut samples = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| CalculusError::Csv(e.to_string()))?;
            let p = parse_real(&record[0])
                .ok_or_else(|| CalculusError::Csv(format!("bad p `{}`", &record[0])))?;
            let v = parse_real(&record[1])
                .ok_or_else(|| CalculusError::Csv(format!("bad norm `{}`", &record[1])))?;
            samples.push((p, v));
        }
        PNormCurve::new(samples, source)
    }
}
