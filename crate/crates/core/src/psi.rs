//! Generating functions `ψ ∈ Ψ(a,b)`.
//!
//! A generating function is a weight `p ↦ ψ(p) > 0` on an open interval
//! `(a,b)` with `1 ≤ a < b ≤ ∞` and `inf ψ > 0`. Every supremum in the GLS
//! calculus runs over the domain of some `ψ`, so the domain lives on the value.
//!
//! Supported families:
//!
//! | family        | `ψ(p)`                                   |
//! |---------------|------------------------------------------|
//! | `Constant`    | `c`                                      |
//! | `Power`       | `p^α`                                    |
//! | `Subgaussian` | `√p`                                     |
//! | `Extremal`    | `1` at `p = r`, `+∞` elsewhere           |
//! | `Natural`     | `‖f‖_p`, read off a [`PNormCurve`]       |
//! | `Tabulated`   | piecewise power law through `(p, ψ)` nodes |
//!
//! The extremal family is a tag, never a large float: the GLS norm under
//! `ψ_r` must be exactly `‖f‖_r`.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use crate::calculus::PNormCurve;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PsiError {
    #[error("InvalidDomain: {0}")]
    InvalidDomain(String),
    #[error("NonPositivePsi: infimum {infimum} on {domain} is not positive")]
    NonPositivePsi { infimum: f64, domain: Interval },
    #[error("BadParams: {0}")]
    BadParams(String),
    #[error("OutOfDomain: p = {p} is outside {domain}")]
    OutOfDomain { p: f64, domain: Interval },
    #[error("BadTable: {0}")]
    BadTable(String),
}

/// Open interval `(a, b)` with `1 ≤ a < b ≤ +∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self, PsiError> {
        if !lower.is_finite() || lower < 1.0 {
            return Err(PsiError::InvalidDomain(format!(
                "lower endpoint {lower} must be finite and at least 1"
            )));
        }
        if upper.is_nan() || upper <= lower {
            return Err(PsiError::InvalidDomain(format!(
                "upper endpoint {upper} must exceed lower endpoint {lower}"
            )));
        }
        Ok(Interval { lower, upper })
    }

    /// `(a, +∞)`.
    pub fn unbounded(lower: f64) -> Result<Self, PsiError> {
        Interval::new(lower, f64::INFINITY)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.upper.is_finite()
    }

    /// Membership in the open interval.
    pub fn contains(&self, p: f64) -> bool {
        p > self.lower && p < self.upper
    }

    /// Membership in the closure `[a, b]`.
    pub fn contains_closed(&self, p: f64) -> bool {
        p >= self.lower && p <= self.upper
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.lower >= other.lower && self.upper <= other.upper
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})",
            crate::format::format_sig(self.lower, 17),
            crate::format::format_sig(self.upper, 17)
        )
    }
}

impl FromStr for Interval {
    type Err = PsiError;

    /// Parses `(a,b)`; `b` may be `inf`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| PsiError::InvalidDomain(format!("expected `(a,b)`, got `{s}`")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| PsiError::InvalidDomain(format!("expected `(a,b)`, got `{s}`")))?;
        let a = crate::format::parse_real(a)
            .ok_or_else(|| PsiError::InvalidDomain(format!("bad lower endpoint `{a}`")))?;
        let b = crate::format::parse_real(b)
            .ok_or_else(|| PsiError::InvalidDomain(format!("bad upper endpoint `{b}`")))?;
        Interval::new(a, b)
    }
}

/// Sorted `(p, ψ(p))` nodes, interpolated linearly in `(ln p, ln ψ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiTable {
    points: Vec<(f64, f64)>,
    ln_p: Vec<f64>,
    ln_psi: Vec<f64>,
}

impl PsiTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, PsiError> {
        if points.len() < 2 {
            return Err(PsiError::BadTable("need at least two nodes".into()));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(PsiError::BadTable(format!(
                    "p must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        for &(p, v) in &points {
            if !(p > 0.0 && p.is_finite()) {
                return Err(PsiError::BadTable(format!(
                    "node p = {p} must be finite and positive"
                )));
            }
            if !(v > 0.0 && v.is_finite()) {
                return Err(PsiError::BadTable(format!(
                    "ψ({p}) = {v} must be finite and positive"
                )));
            }
        }
        let ln_p = points.iter().map(|&(p, _)| p.ln()).collect();
        let ln_psi = points.iter().map(|&(_, v)| v.ln()).collect();
        Ok(PsiTable {
            points,
            ln_p,
            ln_psi,
        })
    }

    /// Reads a two-column CSV with header `p,psi`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, PsiError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| PsiError::BadTable(e.to_string()))?;
        if headers.len() != 2 || &headers[0] != "p" || &headers[1] != "psi" {
            return Err(PsiError::BadTable(format!(
                "expected header `p,psi`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut points = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| PsiError::BadTable(e.to_string()))?;
            let p = crate::format::parse_real(&record[0])
                .ok_or_else(|| PsiError::BadTable(format!("bad p `{}`", &record[0])))?;
            let v = crate::format::parse_real(&record[1])
                .ok_or_else(|| PsiError::BadTable(format!("bad psi `{}`", &record[1])))?;
            points.push((p, v));
        }
        PsiTable::new(points)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self, PsiError> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| PsiError::BadTable(format!("{}: {e}", path.display())))?;
        PsiTable::from_csv(file)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn first_p(&self) -> f64 {
        self.points[0].0
    }

    pub fn last_p(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    /// `ln ψ(p)` for `p` inside the node range, `None` outside.
    pub fn ln_at(&self, p: f64) -> Option<f64> {
        if !(p >= self.first_p() && p <= self.last_p()) {
            return None;
        }
        let i = self.points.partition_point(|&(q, _)| q <= p);
        // i >= 1 here because p >= first node
        let i = i - 1;
        if self.points[i].0 == p || i + 1 == self.points.len() {
            return Some(self.ln_psi[i]);
        }
        let t = (p.ln() - self.ln_p[i]) / (self.ln_p[i + 1] - self.ln_p[i]);
        Some(self.ln_psi[i] + t * (self.ln_psi[i + 1] - self.ln_psi[i]))
    }
}

/// The named families, carrying their parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Constant { level: f64 },
    Power { exponent: f64 },
    Subgaussian,
    Extremal { pivot: f64 },
    Natural(PNormCurve),
    Tabulated(PsiTable),
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Constant { .. } => "const",
            Family::Power { .. } => "power",
            Family::Subgaussian => "sqrtp",
            Family::Extremal { .. } => "extremal",
            Family::Natural(_) => "natural",
            Family::Tabulated(_) => "table",
        }
    }
}

/// A validated generating function: a family plus its open domain.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingFunction {
    domain: Interval,
    family: Family,
    infimum: f64,
}

impl GeneratingFunction {
    /// Builds `ψ`, refusing anything whose infimum over the domain is not positive.
    pub fn new(family: Family, domain: Interval) -> Result<Self, PsiError> {
        let (a, b) = (domain.lower(), domain.upper());
        let infimum = match &family {
            Family::Constant { level } => {
                if level.is_nan() || level.is_infinite() {
                    return Err(PsiError::BadParams(format!(
                        "constant level {level} must be finite"
                    )));
                }
                *level
            }
            Family::Power { exponent } => {
                if !exponent.is_finite() {
                    return Err(PsiError::BadParams(format!(
                        "power exponent {exponent} must be finite"
                    )));
                }
                if *exponent >= 0.0 {
                    a.powf(*exponent)
                } else {
                    b.powf(*exponent)
                }
            }
            Family::Subgaussian => a.sqrt(),
            Family::Extremal { pivot } => {
                if !pivot.is_finite() || !domain.contains_closed(*pivot) {
                    return Err(PsiError::BadParams(format!(
                        "extremal pivot {pivot} must lie in the closure of {domain}"
                    )));
                }
                1.0
            }
            Family::Natural(curve) => {
                if !(curve.first_p() <= a && curve.last_p() >= b) {
                    return Err(PsiError::BadParams(format!(
                        "norm curve on [{}, {}] does not cover {domain}",
                        curve.first_p(),
                        curve.last_p()
                    )));
                }
                let inner = curve
                    .samples()
                    .iter()
                    .map(|&(p, _)| p)
                    .filter(|&p| domain.contains(p));
                min_ln(
                    inner
                        .chain([a, b])
                        .map(|p| curve.ln_at(p).unwrap_or(f64::NEG_INFINITY)),
                )
                .exp()
            }
            Family::Tabulated(table) => {
                if !(table.first_p() <= a && table.last_p() >= b) {
                    return Err(PsiError::BadParams(format!(
                        "table on [{}, {}] does not cover {domain}",
                        table.first_p(),
                        table.last_p()
                    )));
                }
                let inner = table
                    .points()
                    .iter()
                    .map(|&(p, _)| p)
                    .filter(|&p| domain.contains(p));
                min_ln(
                    inner
                        .chain([a, b])
                        .map(|p| table.ln_at(p).unwrap_or(f64::NEG_INFINITY)),
                )
                .exp()
            }
        };
        if !(infimum > 0.0) {
            return Err(PsiError::NonPositivePsi { infimum, domain });
        }
        Ok(GeneratingFunction {
            domain,
            family,
            infimum,
        })
    }

    pub fn constant(level: f64, domain: Interval) -> Result<Self, PsiError> {
        GeneratingFunction::new(Family::Constant { level }, domain)
    }

    pub fn power(exponent: f64, domain: Interval) -> Result<Self, PsiError> {
        GeneratingFunction::new(Family::Power { exponent }, domain)
    }

    pub fn subgaussian(domain: Interval) -> Result<Self, PsiError> {
        GeneratingFunction::new(Family::Subgaussian, domain)
    }

    pub fn extremal(pivot: f64, domain: Interval) -> Result<Self, PsiError> {
        GeneratingFunction::new(Family::Extremal { pivot }, domain)
    }

    pub fn natural(curve: PNormCurve, domain: Interval) -> Result<Self, PsiError> {
        GeneratingFunction::new(Family::Natural(curve), domain)
    }

    pub fn tabulated(table: PsiTable, domain: Interval) -> Result<Self, PsiError> {
        GeneratingFunction::new(Family::Tabulated(table), domain)
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `inf ψ` over the domain (closed form where the family has one).
    pub fn infimum(&self) -> f64 {
        self.infimum
    }

    /// The pivot `r` when this is the extremal `ψ_r`.
    pub fn extremal_pivot(&self) -> Option<f64> {
        match self.family {
            Family::Extremal { pivot } => Some(pivot),
            _ => None,
        }
    }

    fn check(&self, p: f64) -> Result<(), PsiError> {
        let inside = match self.family {
            Family::Extremal { pivot } => p == pivot || self.domain.contains(p),
            _ => self.domain.contains(p),
        };
        if inside {
            Ok(())
        } else {
            Err(PsiError::OutOfDomain {
                p,
                domain: self.domain,
            })
        }
    }

    /// `ψ(p)`. The extremal family returns `+∞` off its pivot.
    pub fn eval(&self, p: f64) -> Result<f64, PsiError> {
        self.check(p)?;
        Ok(match &self.family {
            Family::Constant { level } => *level,
            Family::Power { exponent } => p.powf(*exponent),
            Family::Subgaussian => p.sqrt(),
            Family::Extremal { pivot } => {
                if p == *pivot {
                    1.0
                } else {
                    f64::INFINITY
                }
            }
            Family::Natural(_) | Family::Tabulated(_) => self.ln_extended(p).exp(),
        })
    }

    /// `ln ψ(p)`, in closed form per family.
    pub fn ln(&self, p: f64) -> Result<f64, PsiError> {
        self.check(p)?;
        Ok(self.ln_extended(p))
    }

    /// `ln ψ` continued to the closed domain `[a, b]`, including `p = +∞`
    /// when `b = ∞`. Used by the supremum engine for its endpoint probes.
    pub(crate) fn ln_extended(&self, p: f64) -> f64 {
        match &self.family {
            Family::Constant { level } => level.ln(),
            Family::Power { exponent } => {
                if *exponent == 0.0 {
                    0.0
                } else {
                    exponent * p.ln()
                }
            }
            Family::Subgaussian => 0.5 * p.ln(),
            Family::Extremal { pivot } => {
                if p == *pivot {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Family::Natural(curve) => curve.ln_at(p).unwrap_or(f64::NAN),
            Family::Tabulated(table) => table.ln_at(p).unwrap_or(f64::NAN),
        }
    }

    /// Short identifier in the command-line grammar, e.g. `const:1@(2,6)`.
    pub fn label(&self) -> String {
        use crate::format::format_sig;
        let head = match &self.family {
            Family::Constant { level } => format!("const:{}", format_sig(*level, 12)),
            Family::Power { exponent } => format!("power:{}", format_sig(*exponent, 12)),
            Family::Subgaussian => "sqrtp".to_string(),
            Family::Extremal { pivot } => format!("extremal:{}", format_sig(*pivot, 12)),
            Family::Natural(curve) => format!("natural:{}", curve.source()),
            Family::Tabulated(table) => format!("table[{}]", table.points().len()),
        };
        format!("{head}@{}", self.domain)
    }
}

fn min_ln(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(f64::INFINITY, f64::min)
}

impl FromStr for GeneratingFunction {
    type Err = PsiError;

    /// Parses `family[:param]@(a,b)`.
    ///
    /// Families: `const:c`, `power:α`, `sqrtp` (alias `subgaussian`),
    /// `extremal:r`, `table:path/to/file.csv`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, domain) = s.rsplit_once('@').ok_or_else(|| {
            PsiError::BadParams(format!("expected `family[:param]@(a,b)`, got `{s}`"))
        })?;
        let domain: Interval = domain.parse()?;
        let (name, param) = match head.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p.trim())),
            None => (head.trim(), None),
        };
        let real = |what: &str| -> Result<f64, PsiError> {
            let raw =
                param.ok_or_else(|| PsiError::BadParams(format!("`{name}` needs a {what}")))?;
            crate::format::parse_real(raw)
                .ok_or_else(|| PsiError::BadParams(format!("bad {what} `{raw}`")))
        };
        let family = match name {
            "const" | "constant" => Family::Constant {
                level: real("level")?,
            },
            "power" => Family::Power {
                exponent: real("exponent")?,
            },
            "sqrtp" | "subgaussian" => {
                if param.is_some() {
                    return Err(PsiError::BadParams("`sqrtp` takes no parameter".into()));
                }
                Family::Subgaussian
            }
            "extremal" => Family::Extremal {
                pivot: real("pivot")?,
            },
            "table" => {
                let path =
                    param.ok_or_else(|| PsiError::BadParams("`table` needs a CSV path".into()))?;
                Family::Tabulated(PsiTable::from_csv_path(path)?)
            }
            other => return Err(PsiError::BadParams(format!("unknown family `{other}`"))),
        };
        GeneratingFunction::new(family, domain)
    }
}
