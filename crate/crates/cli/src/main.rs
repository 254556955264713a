//! `gls`: command-line driver for GLS norms, exponents and eigenfunction checks.
//!
//! Exit codes: 0 on success with every check passing, 1 on a failed check or a
//! numeric error, 2 on a usage error.

mod output;

use std::error::Error;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gls_core::format::parse_real;
use gls_core::manifolds::{p_norm_curve, NormConfig};
use gls_core::verify::{self, Report, Theorem, VerifyConfig};
use gls_core::{EigenFamily, Eigenfunction, ExponentProfile, GeneratingFunction, SupSearch};

use output::{render_report, render_scalar, Cell, Format, Table};

type Res<T> = Result<T, Box<dyn Error>>;

#[derive(Debug, Parser)]
#[command(
    name = "gls",
    version,
    about = "Grand Lebesgue Space norms and eigenfunction estimates"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format for tables.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Largest quadrature order tried by the adaptive p-norms.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(2..))]
    quad_cap: Option<u64>,
    /// Relative agreement required between quadrature doublings.
    #[arg(long, global = true, value_parser = positive)]
    norm_tol: Option<f64>,
    /// Stopping width of the sup-search refinement.
    #[arg(long, global = true, value_parser = positive)]
    tol: Option<f64>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
}

impl Common {
    fn search(&self) -> SupSearch {
        self.tol
            .map_or_else(SupSearch::default, SupSearch::with_tol)
    }

    fn norms(&self) -> NormConfig {
        let base = NormConfig::default();
        NormConfig {
            rel_tol: self.norm_tol.unwrap_or(base.rel_tol),
            max_order: self.quad_cap.map_or(base.max_order, |c| c as usize),
        }
    }

    fn verify(&self, samples: usize) -> VerifyConfig {
        VerifyConfig {
            norms: self.norms(),
            search: self.search(),
            curve_samples: samples,
        }
    }
}

/// Selects one eigenfunction: `--family` with `--k`, or `--n a,b` on the torus.
#[derive(Debug, Args)]
struct EigenArgs {
    /// zonal, highest-weight (hw) or torus.
    #[arg(long, value_parser = parse_family)]
    family: EigenFamily,
    /// Degree (sphere) or first frequency component (torus).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: Option<u32>,
    /// Torus frequency vector.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    n: Option<Vec<i32>>,
}

impl EigenArgs {
    fn build(&self) -> Res<Eigenfunction> {
        match (&self.n, self.k) {
            (Some(n), None) if self.family == EigenFamily::Torus => match n.as_slice() {
                [a, b] => Ok(Eigenfunction::torus((*a, *b))?),
                _ => Err("--n takes two integers `a,b`".into()),
            },
            (Some(_), _) => Err("--n applies to --family torus only, without --k".into()),
            (None, Some(k)) => Ok(self.family.member(k)?),
            (None, None) => Err("one of --k or --n is required".into()),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Critical exponent p_c = 2(d+1)/(d-1).
    Pc {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        d: u32,
    },
    /// Source-estimate exponent μ(p).
    Mu {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        d: u32,
        /// Exponents p > 2 (comma separated, `inf` allowed).
        #[arg(long, value_delimiter = ',', required = true, value_parser = real)]
        p: Vec<f64>,
    },
    /// Fundamental function φ(δ) of a GLS space.
    Fundamental {
        #[arg(long, value_parser = parse_psi)]
        psi: GeneratingFunction,
        #[arg(long, value_delimiter = ',', required = true, value_parser = positive)]
        delta: Vec<f64>,
    },
    /// Young–Fenchel transform h(u) of ψ.
    Conjugate {
        #[arg(long, value_parser = parse_psi)]
        psi: GeneratingFunction,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true, value_parser = real)]
        u: Vec<f64>,
    },
    /// p-norm curve of an eigenfunction.
    Norms {
        #[command(flatten)]
        eigen: EigenArgs,
        #[arg(long, value_delimiter = ',', required = true, value_parser = real)]
        p: Vec<f64>,
    },
    /// GLS norm of an eigenfunction.
    GlsNorm {
        #[command(flatten)]
        eigen: EigenArgs,
        #[arg(long, value_parser = parse_psi)]
        psi: GeneratingFunction,
        /// Norm-curve samples across the ψ domain.
        #[arg(long, default_value_t = 33, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(2..))]
        samples: usize,
    },
    /// Right-hand sides of the GLS estimates over a λ grid (C = 1).
    Bound {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
        d: u32,
        /// 21 (small p), 22 (large p) or ex21 (sup-norm example).
        #[arg(long, value_parser = ["21", "22", "ex21"])]
        which: String,
        #[arg(long, value_parser = parse_psi)]
        psi: Option<GeneratingFunction>,
        #[arg(long, value_delimiter = ',', required = true, value_parser = positive)]
        lambda: Vec<f64>,
    },
    /// Fit the growth of ‖e_λ‖_p against μ(p).
    VerifyGrowth {
        #[arg(long, value_parser = parse_family)]
        family: EigenFamily,
        #[arg(long, value_parser = real)]
        p: f64,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128")]
        ks: Vec<u32>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
        d: u32,
        /// Slope tolerance.
        #[arg(long, default_value_t = 0.05, value_parser = positive)]
        slope_tol: f64,
        /// Require |slope − μ(p)| ≤ tol instead of slope ≤ μ(p) + tol.
        #[arg(long)]
        two_sided: bool,
    },
    /// Ratio of GLS norms to a theorem bound across degrees.
    VerifyRatio {
        /// 21 or 22.
        #[arg(long, value_parser = parse_theorem)]
        which: Theorem,
        #[arg(long, value_parser = parse_family)]
        family: EigenFamily,
        #[arg(long, value_parser = parse_psi)]
        psi: GeneratingFunction,
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128")]
        ks: Vec<u32>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
        d: u32,
        /// Largest allowed ratio(λ_max)/ratio(λ_min).
        #[arg(long, default_value_t = 2.0, value_parser = positive)]
        max_drift: f64,
        #[arg(long, default_value_t = 33, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(2..))]
        samples: usize,
    },
    /// Empirical tail against the Chebyshev-form GLS tail bound.
    VerifyTail {
        #[arg(long, value_parser = parse_family)]
        family: EigenFamily,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, value_parser = parse_psi)]
        psi: GeneratingFunction,
        /// Number of levels spaced geometrically above the GLS norm.
        #[arg(long, default_value_t = 50, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
        levels: usize,
        /// Explicit levels (each above the GLS norm); overrides --levels.
        #[arg(long, value_delimiter = ',', value_parser = positive)]
        u: Option<Vec<f64>>,
        /// Relative slack allowed above the bound.
        #[arg(long, default_value_t = 1e-6, value_parser = positive)]
        slack: f64,
        #[arg(long, default_value_t = 33, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(2..))]
        samples: usize,
    },
}

fn real(s: &str) -> Result<f64, String> {
    parse_real(s).ok_or_else(|| format!("`{s}` is not a real number"))
}

fn positive(s: &str) -> Result<f64, String> {
    let x = real(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

fn parse_psi(s: &str) -> Result<GeneratingFunction, String> {
    s.parse::<GeneratingFunction>().map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<EigenFamily, String> {
    s.parse()
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    s.parse()
}

/// Sorted, de-duplicated copy of a p list.
fn increasing(ps: &[f64]) -> Vec<f64> {
    let mut ps = ps.to_vec();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    ps
}

/// Output text plus check summaries; `pass` is false when any check failed.
struct Outcome {
    text: String,
    summary: Vec<String>,
    pass: bool,
}

impl Outcome {
    fn plain(text: String) -> Self {
        Outcome {
            text,
            summary: Vec::new(),
            pass: true,
        }
    }

    fn report(report: &Report, format: Format, summary: Vec<String>) -> Self {
        Outcome {
            text: render_report(report, format),
            summary,
            pass: report.all_passed(),
        }
    }
}

fn execute(common: &Common, command: &Command) -> Res<Outcome> {
    let fmt = common.format;
    let search = common.search();
    Ok(match command {
        Command::Pc { d } => Outcome::plain(render_scalar(
            ExponentProfile::new(*d)?.critical_exponent(),
            fmt,
        )),
        Command::Mu { d, p } => {
            let prof = ExponentProfile::new(*d)?;
            if let [single] = p.as_slice() {
                Outcome::plain(render_scalar(prof.mu(*single)?, fmt))
            } else {
                let mut t = Table::new(&["p", "mu"]);
                for &pi in p {
                    t.push(vec![pi.into(), prof.mu(pi)?.into()]);
                }
                Outcome::plain(t.render(fmt))
            }
        }
        Command::Fundamental { psi, delta } => {
            let mut t = Table::new(&["delta", "phi", "arg", "attained"]);
            for &dl in delta {
                let r = search.fundamental_function(psi, dl)?;
                t.push(vec![
                    dl.into(),
                    r.value.into(),
                    r.arg.into(),
                    Cell::Bool(r.attained),
                ]);
            }
            Outcome::plain(t.render(fmt))
        }
        Command::Conjugate { psi, u } => {
            let mut t = Table::new(&["u", "h", "arg", "attained"]);
            for &ui in u {
                let r = search.young_fenchel(psi, ui)?;
                t.push(vec![
                    ui.into(),
                    r.value.into(),
                    r.arg.into(),
                    Cell::Bool(r.attained),
                ]);
            }
            Outcome::plain(t.render(fmt))
        }
        Command::Norms { eigen, p } => {
            let e = eigen.build()?;
            let curve = p_norm_curve(&e, &increasing(p), &common.norms())?;
            let mut t = Table::new(&["p", "norm"]);
            for &(pi, v) in curve.samples() {
                t.push(vec![pi.into(), v.into()]);
            }
            Outcome::plain(t.render(fmt))
        }
        Command::GlsNorm {
            eigen,
            psi,
            samples,
        } => {
            let e = eigen.build()?;
            let r = verify::eigen_gls_norm(&e, psi, &common.verify(*samples))?;
            Outcome::plain(render_scalar(r.value, fmt))
        }
        Command::Bound {
            d,
            which,
            psi,
            lambda,
        } => {
            let prof = ExponentProfile::new(*d)?;
            let mut t = Table::new(&["lambda", "bound"]);
            for &l in lambda {
                let b = match (which.as_str(), psi) {
                    ("ex21", _) => prof.example21_sup_bound(l)?,
                    ("21", Some(psi)) => prof.theorem21_bound_with(&search, psi, l)?,
                    ("22", Some(psi)) => prof.theorem22_bound_with(&search, psi, l)?,
                    _ => return Err(format!("--which {which} needs --psi").into()),
                };
                t.push(vec![l.into(), b.into()]);
            }
            Outcome::plain(t.render(fmt))
        }
        Command::VerifyGrowth {
            family,
            p,
            ks,
            d,
            slope_tol,
            two_sided,
        } => {
            let prof = ExponentProfile::new(*d)?;
            let fit = verify::check_source_estimate(*family, *p, ks, &prof, &common.verify(33))?;
            let report = Report::growth(*family, *p, ks, &fit, *slope_tol, *two_sided);
            let summary = report.checks.iter().map(|c| c.detail.clone()).collect();
            Outcome::report(&report, fmt, summary)
        }
        Command::VerifyRatio {
            which,
            family,
            psi,
            ks,
            d,
            max_drift,
            samples,
        } => {
            let prof = ExponentProfile::new(*d)?;
            let trace = verify::check_theorem_bound(
                *which,
                *family,
                psi,
                ks,
                &prof,
                &common.verify(*samples),
            )?;
            let report = Report::ratio(*which, *family, psi, &trace, *max_drift);
            let summary = report
                .checks
                .iter()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect();
            Outcome::report(&report, fmt, summary)
        }
        Command::VerifyTail {
            family,
            k,
            psi,
            levels,
            u,
            slack,
            samples,
        } => {
            let cfg = common.verify(*samples);
            let us = match u {
                Some(us) => us.clone(),
                None => {
                    let e = family.member(*k)?;
                    let g = verify::eigen_gls_norm(&e, psi, &cfg)?.value;
                    let top = (1.1 * e.sup_norm()).max(3.0 * g);
                    (1..=*levels)
                        .map(|i| g * (top / g).powf(i as f64 / *levels as f64))
                        .collect()
                }
            };
            let check = verify::check_tail(*family, *k, psi, &us, &cfg)?;
            let report = Report::tail(*family, *k, psi, &check, *slack);
            let summary = report
                .checks
                .iter()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect();
            Outcome::report(&report, fmt, summary)
        }
    })
}

fn emit(common: &Common, outcome: &Outcome) -> std::io::Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => std::io::stdout()
            .lock()
            .write_all(outcome.text.as_bytes())?,
    }
    // summaries go to stderr so the table on stdout stays machine-readable
    let mut err = std::io::stderr().lock();
    for line in &outcome.summary {
        writeln!(err, "{line}")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match execute(&cli.common, &cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&cli.common, &outcome) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
