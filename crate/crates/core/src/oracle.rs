//! Brute-force reference for the closed forms in [`crate::analytic`].
//!
//! The signal mode `a` (reduced to one waveguide) and one effective thermal
//! mode `b` are truncated in the Fock basis and mixed by the beamsplitter
//! `â′ = √η â + √(1−η) b̂`. The beamsplitter conserves total photon number, so
//! it is stored as one orthogonal block per total number `k`, each block
//! complete on its `k + 1` states `|n_a, k − n_a⟩`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;

use crate::error::{domain, Error, Result};
use crate::model::{decayed_qubit_state, pauli, DetectorParams, QubitDensityMatrix};

/// Thermal population allowed above the cutoff.
pub const TAIL_TOL: f64 = 1e-12;

/// Minimum headroom of the cutoff above the signal photon number.
pub const CUTOFF_HEADROOM: usize = 10;

/// Single-mode density matrix on `|0⟩ … |D−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    data: DMatrix<C64>,
    discarded: f64,
}

impl FockDensityMatrix {
    fn diagonal(populations: &[f64], discarded: f64) -> Self {
        let d = populations.len();
        let data = DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                C64::new(populations[r], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self { data, discarded }
    }

    pub fn cutoff(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    /// Population removed by truncation before renormalizing.
    pub fn discarded_mass(&self) -> f64 {
        self.discarded
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.cutoff()).map(|i| self.data[(i, i)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.populations().iter().sum()
    }

    /// `⟨n̂⟩` and `⟨n̂²⟩ − ⟨n̂⟩²`.
    pub fn number_moments(&self) -> (f64, f64) {
        let p = self.populations();
        let mean: f64 = p.iter().enumerate().map(|(n, q)| n as f64 * q).sum();
        let second: f64 = p.iter().enumerate().map(|(n, q)| (n * n) as f64 * q).sum();
        (mean, second - mean * mean)
    }

    fn support(&self) -> usize {
        let d = self.cutoff();
        (0..d)
            .rev()
            .find(|&i| (0..d).any(|j| self.data[(i, j)].norm() > 0.0 || self.data[(j, i)].norm() > 0.0))
            .map_or(1, |i| i + 1)
    }
}

/// `Σ_{n ≥ D} pₙ = (f̄/(1+f̄))^D` for the geometric distribution.
pub fn thermal_tail_mass(f_bar: f64, cutoff: usize) -> f64 {
    if f_bar == 0.0 {
        return 0.0;
    }
    (f_bar / (1.0 + f_bar)).powi(cutoff as i32)
}

/// Smallest cutoff with tail mass below [`TAIL_TOL`] and at least
/// `n + CUTOFF_HEADROOM` levels.
pub fn auto_cutoff(f_bar: f64, n: u32) -> usize {
    let mut d = 1;
    while thermal_tail_mass(f_bar, d) >= TAIL_TOL {
        d += 1;
    }
    d.max(n as usize + CUTOFF_HEADROOM)
}

/// Truncated, renormalized thermal state `pₙ = f̄ⁿ/(1+f̄)^{n+1}`.
pub fn thermal_state(f_bar: f64, cutoff: usize) -> Result<FockDensityMatrix> {
    if !(f_bar >= 0.0) || !f_bar.is_finite() {
        return Err(domain(format!("mean occupation {f_bar} must be finite and non-negative")));
    }
    if cutoff == 0 {
        return Err(domain("cutoff must be at least 1"));
    }
    let tail = thermal_tail_mass(f_bar, cutoff);
    if tail >= TAIL_TOL {
        return Err(Error::Cutoff {
            f_bar,
            cutoff,
            tail,
            suggested: auto_cutoff(f_bar, 0),
        });
    }
    let ratio = f_bar / (1.0 + f_bar);
    let mut p = Vec::with_capacity(cutoff);
    let mut term = 1.0 / (1.0 + f_bar);
    for _ in 0..cutoff {
        p.push(term);
        term *= ratio;
    }
    let kept: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= kept);
    Ok(FockDensityMatrix::diagonal(&p, tail))
}

/// One-waveguide reduction of the symmetric `n`-photon signal over `N` guides:
/// vacuum for `n = 0`, `(1−1/N)|0⟩⟨0| + (1/N)|1⟩⟨1|` for `n = 1`.
pub fn reduced_signal_state(n: u32, n_waveguides: usize, cutoff: usize) -> Result<FockDensityMatrix> {
    if n_waveguides == 0 {
        return Err(domain("number of waveguides must be at least 1"));
    }
    if cutoff < n as usize + 1 {
        return Err(domain(format!("cutoff {cutoff} cannot hold {n} photons")));
    }
    let mut p = vec![0.0; cutoff];
    match n {
        0 => p[0] = 1.0,
        1 => {
            let share = 1.0 / n_waveguides as f64;
            p[0] = 1.0 - share;
            p[1] = share;
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "signal states with {n} photons"
            )))
        }
    }
    Ok(FockDensityMatrix::diagonal(&p, 0.0))
}

/// `exp[ξ(â†b̂ − âb̂†)]` with `cos ξ = √η`, one block per total photon number.
#[derive(Debug, Clone)]
pub struct BeamsplitterUnitary {
    eta: f64,
    blocks: Vec<DMatrix<f64>>,
}

/// Generator `â†b̂ − âb̂†` on `|n_a, k − n_a⟩`, `n_a = 0..=k`.
fn generator_block(k: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(k + 1, k + 1);
    for na in 0..k {
        // â†b̂ |na, k−na⟩ = √(na+1)√(k−na) |na+1, k−na−1⟩
        let c = ((na + 1) as f64 * (k - na) as f64).sqrt();
        g[(na + 1, na)] = c;
        g[(na, na + 1)] = -c;
    }
    g
}

impl BeamsplitterUnitary {
    /// Blocks for every total photon number `0..=max_total`.
    pub fn new(eta: f64, max_total: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(domain(format!("eta = {eta} outside [0, 1]")));
        }
        let xi = eta.sqrt().acos();
        let blocks = (0..=max_total)
            .map(|k| (generator_block(k) * xi).exp())
            .collect();
        Ok(Self { eta, blocks })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn max_total(&self) -> usize {
        self.blocks.len() - 1
    }

    /// Block acting on total photon number `k`, indexed by `n_a`.
    pub fn block(&self, k: usize) -> &DMatrix<f64> {
        &self.blocks[k]
    }

    /// Embeds the blocks into the product basis `|n_a⟩⊗|n_b⟩`, index
    /// `n_a·D + n_b`, both modes cut at `D`. Blocks with `k ≥ D` are only
    /// partially representable there.
    pub fn to_product_basis(&self, cutoff: usize) -> DMatrix<f64> {
        let dim = cutoff * cutoff;
        let mut u = DMatrix::zeros(dim, dim);
        for k in 0..=(2 * cutoff - 2).min(self.max_total()) {
            let block = &self.blocks[k];
            for na in 0..=k {
                for na2 in 0..=k {
                    let (nb, nb2) = (k - na, k - na2);
                    if na < cutoff && nb < cutoff && na2 < cutoff && nb2 < cutoff {
                        u[(na * cutoff + nb, na2 * cutoff + nb2)] = block[(na, na2)];
                    }
                }
            }
        }
        u
    }
}

/// Photon-number distribution of `â′ = √η â + √(1−η) b̂`, i.e. the diagonal
/// of `B(ρ_a⊗ρ_b)B†` on mode `a`.
pub fn output_number_distribution(
    signal: &FockDensityMatrix,
    noise: &FockDensityMatrix,
    bs: &BeamsplitterUnitary,
) -> Result<Vec<f64>> {
    let (da, db) = (signal.support(), noise.support());
    let max_total = da + db - 2;
    if bs.max_total() < max_total {
        return Err(domain(format!(
            "beamsplitter covers {} photons, states need {max_total}",
            bs.max_total()
        )));
    }
    let (ra, rb) = (signal.matrix(), noise.matrix());
    let mut dist = vec![0.0; max_total + 1];
    for k in 0..=max_total {
        let lo = k.saturating_sub(db - 1);
        let hi = k.min(da - 1);
        if lo > hi {
            continue;
        }
        let range: Vec<usize> = (lo..=hi).collect();
        let rho = DMatrix::from_fn(range.len(), range.len(), |i, j| {
            let (a, a2) = (range[i], range[j]);
            ra[(a, a2)] * rb[(k - a, k - a2)]
        });
        if rho.iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        let u = bs.block(k);
        for (m, out) in dist.iter_mut().enumerate().take(k + 1) {
            let row = DVector::from_fn(range.len(), |i, _| C64::new(u[(m, range[i])], 0.0));
            *out += (row.transpose() * &rho * &row)[(0, 0)].re;
        }
    }
    Ok(dist)
}

/// Oracle value with the cutoff it was computed at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: C64,
    pub cutoff: usize,
}

fn resolve_cutoff(f_bar: f64, n: u32, cutoff: Option<usize>) -> usize {
    cutoff.unwrap_or_else(|| auto_cutoff(f_bar, n))
}

/// Distribution of `n̂′` for the standard signal and thermal inputs.
pub fn oracle_number_distribution(
    n: u32,
    eta: f64,
    n_waveguides: usize,
    f_bar: f64,
    cutoff: Option<usize>,
) -> Result<(Vec<f64>, usize)> {
    let d = resolve_cutoff(f_bar, n, cutoff);
    let noise = thermal_state(f_bar, d)?;
    let signal = reduced_signal_state(n, n_waveguides, d)?;
    let bs = BeamsplitterUnitary::new(eta, d + n as usize)?;
    Ok((output_number_distribution(&signal, &noise, &bs)?, d))
}

/// `Tr[(ρ_a⊗ρ_b) B† e^{iθ n̂_a} B]`, to be compared with the closed form at
/// `f_T = (1−η)f̄`. `cutoff = None` picks [`auto_cutoff`].
pub fn oracle_phase_expectation(
    n: u32,
    theta: f64,
    eta: f64,
    n_waveguides: usize,
    f_bar: f64,
    cutoff: Option<usize>,
) -> Result<OracleValue> {
    let (dist, d) = oracle_number_distribution(n, eta, n_waveguides, f_bar, cutoff)?;
    Ok(OracleValue {
        value: phase_of_distribution(&dist, theta),
        cutoff: d,
    })
}

/// Same as [`oracle_phase_expectation`] for an arbitrary signal state.
pub fn oracle_phase_expectation_for_state(
    signal: &FockDensityMatrix,
    theta: f64,
    eta: f64,
    f_bar: f64,
    cutoff: usize,
) -> Result<C64> {
    let noise = thermal_state(f_bar, cutoff)?;
    let bs = BeamsplitterUnitary::new(eta, signal.support() + cutoff)?;
    let dist = output_number_distribution(signal, &noise, &bs)?;
    Ok(phase_of_distribution(&dist, theta))
}

fn phase_of_distribution(dist: &[f64], theta: f64) -> C64 {
    dist.iter()
        .enumerate()
        .map(|(m, p)| p * C64::from_polar(1.0, theta * m as f64))
        .sum()
}

fn to_matrix(op: &[[C64; 2]; 2]) -> Matrix2<C64> {
    Matrix2::new(op[0][0], op[0][1], op[1][0], op[1][1])
}

/// `exp(−i·angle/2·σ)` for a Pauli matrix `σ`.
fn half_angle_rotation(sigma: &[[C64; 2]; 2], angle: f64) -> Matrix2<C64> {
    let (s, c) = (0.5 * angle).sin_cos();
    Matrix2::identity() * C64::new(c, 0.0) - to_matrix(sigma) * C64::new(0.0, s)
}

/// `Tr[ρ U σ^z U†]` with `U = e^{−iα σ^z/2} e^{−iΔ σ^x/2}`.
fn rotated_sigma_z(rho: &QubitDensityMatrix, delta: f64, alpha: f64) -> f64 {
    let u = half_angle_rotation(&pauli::Z, alpha) * half_angle_rotation(&pauli::X, delta);
    let evolved = u * to_matrix(&pauli::Z) * u.adjoint();
    (to_matrix(&rho.data) * evolved).trace().re
}

/// `⟨σ′^z⟩` for one qubit starting in `(|0⟩ + |1⟩)/√2`, averaging the exact
/// qubit rotation over the photon-number distribution of `n̂′`.
pub fn evolved_sigma_z(
    n: u32,
    params: &DetectorParams,
    f_bar: f64,
    cutoff: Option<usize>,
) -> Result<f64> {
    evolved_sigma_z_from(n, params, f_bar, cutoff, &QubitDensityMatrix::plus())
}

/// [`evolved_sigma_z`] for an arbitrary initial qubit state.
pub fn evolved_sigma_z_from(
    n: u32,
    params: &DetectorParams,
    f_bar: f64,
    cutoff: Option<usize>,
    qubit: &QubitDensityMatrix,
) -> Result<f64> {
    params.validate()?;
    let (dist, _) = oracle_number_distribution(n, params.eta, params.n_waveguides, f_bar, cutoff)?;
    Ok(dist
        .iter()
        .enumerate()
        .map(|(m, p)| p * rotated_sigma_z(qubit, params.delta, params.theta * m as f64))
        .sum())
}

/// `⟨δ²S′^z⟩` treating the `NM` qubits as independent: `NM(1 − ⟨σ′^z⟩²)/4`.
/// Correlations mediated by the shared signal photon are not included.
pub fn collective_variance_independent(
    n: u32,
    params: &DetectorParams,
    f_bar: f64,
    cutoff: Option<usize>,
) -> Result<f64> {
    let s = evolved_sigma_z(n, params, f_bar, cutoff)?;
    Ok(0.25 * params.total_qubits() as f64 * (1.0 - s * s))
}

/// Worst margins of [`decayed_qubit_state`] over a time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayReport {
    pub points: usize,
    /// Smallest eigenvalue seen (PSD margin).
    pub min_eigenvalue: f64,
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    /// Largest deviation from the element-wise parameterization
    /// `ρ₁₁ = e^{−2Γt}/2`, `ρ₁₀ = e^{−Γt}/2`.
    pub max_element_error: f64,
}

impl DecayReport {
    pub fn passed(&self) -> bool {
        self.min_eigenvalue >= -1e-12
            && self.max_trace_error <= 1e-12
            && self.max_hermiticity_error <= 1e-12
            && self.max_element_error <= 1e-14
    }
}

pub fn decay_consistency_check(gamma: f64, t_grid: &[f64]) -> Result<DecayReport> {
    let mut report = DecayReport {
        points: 0,
        min_eigenvalue: f64::INFINITY,
        max_trace_error: 0.0,
        max_hermiticity_error: 0.0,
        max_element_error: 0.0,
    };
    for &t in t_grid {
        if !t.is_finite() {
            return Err(domain(format!("time {t} is not finite")));
        }
        let rho = decayed_qubit_state(gamma, t)?;
        let m = to_matrix(&rho.data);
        let min_ev = m
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let excited = 0.5 * (-2.0 * gamma * t).exp();
        let coherence = 0.5 * (-gamma * t).exp();
        let direct = QubitDensityMatrix::new([
            [C64::new(excited, 0.0), C64::new(coherence, 0.0)],
            [C64::new(coherence, 0.0), C64::new(1.0 - excited, 0.0)],
        ]);
        report.points += 1;
        report.min_eigenvalue = report.min_eigenvalue.min(min_ev);
        report.max_trace_error = report.max_trace_error.max((rho.trace() - 1.0).norm());
        report.max_hermiticity_error = report.max_hermiticity_error.max(rho.hermiticity_error());
        report.max_element_error = report.max_element_error.max(rho.max_abs_diff(&direct));
    }
    Ok(report)
}
