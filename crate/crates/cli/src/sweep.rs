//! Sweep drivers. Grid points are evaluated in parallel and emitted in
//! row-major order of [`Target::parameters`].

use rayon::prelude::*;

use qdet_core::analytic::{
    contrast, negative_contrast_threshold, phase_expectation, renormalized_contrast, snr,
};
use qdet_core::oracle::oracle_phase_expectation;
use qdet_core::squeezing::{
    gain_from_state, giant_spin_ground_state, CouplingMode, DickeState, GainSource,
    IsingChainSpec, PartialEntanglementSpec, DEFAULT_MAX_CHAIN_QUBITS,
};
use qdet_core::{DetectorParams, Error};

use crate::config::{SweepConfig, Target};
use crate::error::{CliError, Result};
use crate::record::{Cell, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Largest nearest-neighbour ring diagonalized on the full register.
    pub max_chain_qubits: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            max_chain_qubits: DEFAULT_MAX_CHAIN_QUBITS,
        }
    }
}

struct Row {
    cells: Vec<Cell>,
    warnings: Vec<String>,
}

impl Row {
    fn new(cells: Vec<Cell>) -> Self {
        Self {
            cells,
            warnings: Vec::new(),
        }
    }
}

fn collect(columns: &[&str], rows: Vec<Row>) -> Dataset {
    let mut ds = Dataset::new(columns);
    for row in rows {
        ds.warnings.extend(row.warnings);
        ds.push(row.cells);
    }
    ds
}

fn product2<A: Copy, B: Copy>(a: &[A], b: &[B]) -> Vec<(A, B)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

fn prepared(cfg: &SweepConfig, target: Target) -> Result<SweepConfig> {
    if cfg.target != target {
        return Err(CliError::Config(format!(
            "config target is {}, expected {}",
            cfg.target.as_str(),
            target.as_str()
        )));
    }
    let cfg = cfg.clone().with_defaults();
    cfg.validate()?;
    Ok(cfg)
}

fn check_eta(eta: &[f64]) -> Result<()> {
    match eta.iter().find(|e| !(0.0..=1.0).contains(*e)) {
        Some(e) => Err(CliError::Config(format!("eta = {e} outside [0, 1]"))),
        None => Ok(()),
    }
}

fn check_positive(name: &str, xs: &[usize]) -> Result<()> {
    if xs.contains(&0) {
        return Err(CliError::Config(format!("`{name}` must be at least 1")));
    }
    Ok(())
}

fn check_non_negative(name: &str, xs: &[f64]) -> Result<()> {
    match xs.iter().find(|x| !(**x >= 0.0)) {
        Some(x) => Err(CliError::Config(format!("`{name}` = {x} must be non-negative"))),
        None => Ok(()),
    }
}

/// Renormalized contrast map over (θ, f_T).
///
/// Columns: `theta, f_T, eta, N, renormalized_contrast,
/// contrast_at_reference_eta_N, threshold_f_T_star`. Undefined points are
/// written as sentinels and counted in [`Dataset::warnings`].
pub fn run_contrast_map(cfg: &SweepConfig) -> Result<Dataset> {
    let cfg = prepared(cfg, Target::ContrastMap)?;
    let thetas = cfg.reals("theta")?;
    let f_ts = cfg.reals("f_T")?;
    let etas = cfg.reals("eta")?;
    let guides = cfg.counts("N")?;
    check_eta(&etas)?;
    check_positive("N", &guides)?;
    check_non_negative("f_T", &f_ts)?;

    let points: Vec<_> = product2(&product2(&thetas, &f_ts), &product2(&etas, &guides))
        .into_iter()
        .map(|((t, f), (e, n))| (t, f, e, n))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(theta, f_t, eta, n)| {
            let mut warnings = Vec::new();
            let renorm = match renormalized_contrast(theta, f_t) {
                Ok(v) => v,
                Err(Error::Divergent(_)) => {
                    warnings.push(format!("theta={theta} f_T={f_t}: renormalized contrast diverges"));
                    f64::INFINITY
                }
                Err(e) => return Err(e.into()),
            };
            let c = contrast(theta, eta, n, f_t).unwrap_or_else(|_| {
                warnings.push(format!("theta={theta} f_T={f_t}: contrast undefined"));
                f64::NAN
            });
            let star = negative_contrast_threshold(theta).unwrap_or_else(|_| {
                warnings.push(format!("theta={theta}: threshold infinite"));
                f64::INFINITY
            });
            Ok(Row {
                cells: vec![
                    theta.into(),
                    f_t.into(),
                    eta.into(),
                    n.into(),
                    renorm.into(),
                    c.into(),
                    star.into(),
                ],
                warnings,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(
        &[
            "theta",
            "f_T",
            "eta",
            "N",
            "renormalized_contrast",
            "contrast_at_reference_eta_N",
            "threshold_f_T_star",
        ],
        rows,
    ))
}

/// Readout gain versus qubit number for entangled fractions `k`.
///
/// `R_numeric` is available at the endpoints only: the x-polarized product
/// state for `M_E = 0` and the giant-spin ground state at `lambda` for
/// `M_E = M`. `r_source` names where it came from.
pub fn run_gain_vs_m(cfg: &SweepConfig) -> Result<Dataset> {
    let cfg = prepared(cfg, Target::GainVsM)?;
    let ms = cfg.counts("M")?;
    let ks = cfg.reals("k")?;
    let lambdas = cfg.reals("lambda")?;
    check_positive("M", &ms)?;
    check_non_negative("lambda", &lambdas)?;

    let points: Vec<_> = product2(&product2(&ms, &ks), &lambdas)
        .into_iter()
        .map(|((m, k), l)| (m, k, l))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(m, k, lambda)| {
            let (spec, clamped) = PartialEntanglementSpec::from_fraction(m, k)?;
            let mut row_warnings = Vec::new();
            if clamped {
                row_warnings.push(format!(
                    "M={m} k={k}: entangled subset clamped to {}",
                    spec.entangled
                ));
            }
            let (numeric, source) = if spec.entangled == 0 {
                let x = DickeState::x_polarized(m, true);
                (gain_from_state(&x)?.gain_r, "product_state")
            } else if spec.entangled == m && lambda > 0.0 {
                let (g, _) = giant_spin_ground_state(m, lambda);
                (gain_from_state(&g)?.gain_r, "dicke_ground_state")
            } else {
                (f64::NAN, "none")
            };
            let mut row = Row::new(vec![
                m.into(),
                k.into(),
                lambda.into(),
                spec.entangled.into(),
                clamped.into(),
                spec.gain().into(),
                numeric.into(),
                source.into(),
            ]);
            row.warnings = row_warnings;
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(
        &["M", "k", "lambda", "M_E", "clamped", "R_formula", "R_numeric", "r_source"],
        rows,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Correlation {
    Uncorrelated,
    GiantSpin,
    Partial,
    NnIsing,
}

impl Correlation {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "uncorrelated" => Ok(Self::Uncorrelated),
            "giant_spin" => Ok(Self::GiantSpin),
            "partial" => Ok(Self::Partial),
            "nn_ising" => Ok(Self::NnIsing),
            other => Err(CliError::Config(format!(
                "unknown mode \"{other}\" (uncorrelated | giant_spin | partial | nn_ising)"
            ))),
        }
    }
}

/// Readout gain for one correlation mode, with its provenance and any warning.
fn mode_gain(
    mode: Correlation,
    m: usize,
    lambda_or_k: f64,
    opts: &RunOptions,
) -> Result<(f64, &'static str, Option<String>)> {
    let chain = |coupling| -> Result<(f64, &'static str, Option<String>)> {
        let g = IsingChainSpec::new(m, lambda_or_k, coupling)?.gain(opts.max_chain_qubits)?;
        let source = match g.source {
            GainSource::Numeric => "numeric",
            GainSource::ClosedForm => "closed_form",
        };
        Ok((g.value, source, None))
    };
    match mode {
        Correlation::Uncorrelated => Ok(((m as f64).sqrt(), "formula", None)),
        Correlation::GiantSpin => chain(CouplingMode::GiantSpin),
        Correlation::NnIsing => chain(CouplingMode::NearestNeighbour),
        Correlation::Partial => {
            let (spec, clamped) = PartialEntanglementSpec::from_fraction(m, lambda_or_k)?;
            let warning = clamped.then(|| {
                format!("M={m} k={lambda_or_k}: entangled subset clamped to {}", spec.entangled)
            });
            Ok((spec.gain(), "formula", warning))
        }
    }
}

/// SNR table across correlation modes.
///
/// The third axis is `k` for `partial` and `lambda` for every other mode;
/// both appear in the single `lambda_or_k` column.
pub fn run_snr_table(cfg: &SweepConfig, opts: &RunOptions) -> Result<Dataset> {
    let cfg = prepared(cfg, Target::Snr)?;
    let modes = cfg
        .texts("mode")?
        .iter()
        .map(|s| Ok((Correlation::parse(s)?, s.clone())))
        .collect::<Result<Vec<_>>>()?;
    let ms = cfg.counts("M")?;
    let ks = cfg.reals("k")?;
    let lambdas = cfg.reals("lambda")?;
    let deltas = cfg.reals("delta")?;
    let thetas = cfg.reals("theta")?;
    let etas = cfg.reals("eta")?;
    let guides = cfg.counts("N")?;
    let f_ts = cfg.reals("f_T")?;
    check_positive("M", &ms)?;
    check_positive("N", &guides)?;
    check_eta(&etas)?;
    check_non_negative("lambda", &lambdas)?;
    check_non_negative("f_T", &f_ts)?;

    let mut points = Vec::new();
    for (mode, name) in &modes {
        let axis = if *mode == Correlation::Partial { &ks } else { &lambdas };
        for &m in &ms {
            for &x in axis {
                for &delta in &deltas {
                    for &theta in &thetas {
                        for &eta in &etas {
                            for &n in &guides {
                                for &f_t in &f_ts {
                                    points.push((*mode, name.as_str(), m, x, delta, theta, eta, n, f_t));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let rows = points
        .par_iter()
        .map(|&(mode, name, m, x, delta, theta, eta, n, f_t)| {
            let (r, source, warning) = mode_gain(mode, m, x, opts)?;
            let params = DetectorParams::new(n, m, theta, delta, eta)?;
            let mut warnings: Vec<String> = warning.into_iter().collect();
            let c = contrast(theta, eta, n, f_t).unwrap_or_else(|_| {
                warnings.push(format!("theta={theta} f_T={f_t}: contrast undefined"));
                f64::NAN
            });
            Ok(Row {
                cells: vec![
                    name.into(),
                    m.into(),
                    x.into(),
                    delta.into(),
                    theta.into(),
                    eta.into(),
                    n.into(),
                    f_t.into(),
                    r.into(),
                    source.into(),
                    snr(0, &params, f_t, r).into(),
                    snr(1, &params, f_t, r).into(),
                    c.into(),
                ],
                warnings,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(
        &[
            "mode",
            "M",
            "lambda_or_k",
            "delta",
            "theta",
            "eta",
            "N",
            "f_T",
            "R",
            "r_source",
            "SNR_0",
            "SNR_1",
            "contrast",
        ],
        rows,
    ))
}

/// Summary of an oracle-versus-closed-form run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub points: usize,
    pub max_error: f64,
    pub mean_error: f64,
    pub tolerance: f64,
    /// Points above tolerance.
    pub exceeded: usize,
    /// Points the oracle could not evaluate, with the reason.
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.exceeded == 0 && self.failures.is_empty()
    }

    /// `Verification` when any point exceeds tolerance, `Resource` when only
    /// cutoff failures remain.
    pub fn status(&self) -> Result<()> {
        if self.exceeded > 0 {
            Err(CliError::Verification(format!(
                "{} of {} points above tolerance {:e} (max error {:e})",
                self.exceeded, self.points, self.tolerance, self.max_error
            )))
        } else if !self.failures.is_empty() {
            Err(CliError::Resource(format!(
                "{} points failed: {}",
                self.failures.len(),
                self.failures[0]
            )))
        } else {
            Ok(())
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "verify: {} points, max error {:e}, mean error {:e}, tolerance {:e}, {} above, {} failed",
            self.points,
            self.max_error,
            self.mean_error,
            self.tolerance,
            self.exceeded,
            self.failures.len()
        )
    }
}

/// Per-point `|oracle − closed form|` for `⟨e^{iθn̂′}⟩`, with `f_T = (1−η)f̄`.
///
/// `cutoff = 0` selects the cutoff automatically per point.
pub fn run_verify(cfg: &SweepConfig) -> Result<(Dataset, VerifyReport)> {
    let cfg = prepared(cfg, Target::Verify)?;
    let ns = cfg.counts("n")?;
    let thetas = cfg.reals("theta")?;
    let etas = cfg.reals("eta")?;
    let guides = cfg.counts("N")?;
    let f_bars = cfg.reals("f_bar")?;
    let tolerance = cfg.scalar("tolerance")?;
    let cutoff = match cfg.counts("cutoff")?.as_slice() {
        [0] => None,
        [d] => Some(*d),
        _ => unreachable!("validated scalar"),
    };
    check_eta(&etas)?;
    check_positive("N", &guides)?;
    check_non_negative("f_bar", &f_bars)?;

    let mut points = Vec::new();
    for &n in &ns {
        for &theta in &thetas {
            for &eta in &etas {
                for &g in &guides {
                    for &f_bar in &f_bars {
                        points.push((n as u32, theta, eta, g, f_bar));
                    }
                }
            }
        }
    }
    let results: Vec<_> = points
        .par_iter()
        .map(|&(n, theta, eta, g, f_bar)| {
            let f_t = (1.0 - eta) * f_bar;
            let analytic = phase_expectation(n, theta, eta, g, f_t).value;
            let oracle = oracle_phase_expectation(n, theta, eta, g, f_bar, cutoff);
            (n, theta, eta, g, f_bar, f_t, analytic, oracle)
        })
        .collect();

    let mut ds = Dataset::new(&[
        "n",
        "theta",
        "eta",
        "N",
        "f_bar",
        "f_T",
        "cutoff",
        "oracle_re",
        "oracle_im",
        "analytic_re",
        "analytic_im",
        "abs_error",
        "status",
    ]);
    let mut report = VerifyReport {
        points: results.len(),
        max_error: 0.0,
        mean_error: 0.0,
        tolerance,
        exceeded: 0,
        failures: Vec::new(),
    };
    let mut evaluated = 0usize;
    for (n, theta, eta, g, f_bar, f_t, analytic, oracle) in results {
        let inputs = vec![n.into(), theta.into(), eta.into(), g.into(), f_bar.into(), f_t.into()];
        let tail = match oracle {
            Ok(o) => {
                let err = (o.value - analytic).norm();
                evaluated += 1;
                report.max_error = report.max_error.max(err);
                report.mean_error += err;
                let status = if err > tolerance {
                    report.exceeded += 1;
                    "above_tolerance"
                } else {
                    "ok"
                };
                vec![
                    o.cutoff.into(),
                    o.value.re.into(),
                    o.value.im.into(),
                    analytic.re.into(),
                    analytic.im.into(),
                    err.into(),
                    status.into(),
                ]
            }
            Err(e) => {
                report
                    .failures
                    .push(format!("n={n} theta={theta} eta={eta} N={g} f_bar={f_bar}: {e}"));
                vec![
                    cutoff.unwrap_or(0).into(),
                    f64::NAN.into(),
                    f64::NAN.into(),
                    analytic.re.into(),
                    analytic.im.into(),
                    f64::NAN.into(),
                    Cell::text(match e {
                        Error::Cutoff { .. } => "cutoff_error",
                        _ => "error",
                    }),
                ]
            }
        };
        ds.push(inputs.into_iter().chain(tail).collect());
    }
    if evaluated > 0 {
        report.mean_error /= evaluated as f64;
    }
    ds.warnings = report.failures.clone();
    Ok((ds, report))
}

/// Result of one sweep command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub dataset: Dataset,
    pub verify: Option<VerifyReport>,
}

pub fn run(cfg: &SweepConfig, opts: &RunOptions) -> Result<Outcome> {
    let (dataset, verify) = match cfg.target {
        Target::ContrastMap => (run_contrast_map(cfg)?, None),
        Target::GainVsM => (run_gain_vs_m(cfg)?, None),
        Target::Snr => (run_snr_table(cfg, opts)?, None),
        Target::Verify => {
            let (d, r) = run_verify(cfg)?;
            (d, Some(r))
        }
    };
    Ok(Outcome { dataset, verify })
}
