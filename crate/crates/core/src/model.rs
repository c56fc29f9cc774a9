//! Detector parameters, thermal occupations and the qubit decay channel.
//!
//! Qubit matrices use the ordering `(|1⟩, |0⟩)` throughout the crate, with
//! `σ^z = |1⟩⟨1| − |0⟩⟨0|` and `σ^x = |1⟩⟨0| + |0⟩⟨1|`.

use num_complex::Complex64 as C64;

use crate::error::{domain, Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Physical and effective parameters of the waveguide/qubit array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    /// Number of parallel waveguides `N`.
    pub n_waveguides: usize,
    /// Qubits per waveguide `M`.
    pub qubits_per_guide: usize,
    /// Phase rotation about z imparted by one photon, radians.
    pub theta: f64,
    /// Mean-field rotation about x, radians.
    pub delta: f64,
    /// Quantum efficiency in `[0, 1]`.
    pub eta: f64,
    /// Effective qubit decay rate.
    pub gamma: f64,
    /// Duration of the mean-field rotation window.
    pub tau1: f64,
    /// Duration of the photon interaction window.
    pub tau2: f64,
}

impl DetectorParams {
    pub fn new(
        n_waveguides: usize,
        qubits_per_guide: usize,
        theta: f64,
        delta: f64,
        eta: f64,
    ) -> Result<Self> {
        let params = Self {
            n_waveguides,
            qubits_per_guide,
            theta,
            delta,
            eta,
            gamma: 0.0,
            tau1: 0.0,
            tau2: 0.0,
        };
        params.validate()?;
        Ok(params)
    }

    /// Sets the decay rate and the two window durations.
    pub fn with_timing(mut self, gamma: f64, tau1: f64, tau2: f64) -> Result<Self> {
        self.gamma = gamma;
        self.tau1 = tau1;
        self.tau2 = tau2;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_waveguides == 0 {
            return Err(domain("number of waveguides must be at least 1"));
        }
        if self.qubits_per_guide == 0 {
            return Err(domain("qubits per waveguide must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(domain(format!("eta = {} outside [0, 1]", self.eta)));
        }
        if !self.theta.is_finite() || !self.delta.is_finite() {
            return Err(domain("rotation angles must be finite"));
        }
        for (name, v) in [("gamma", self.gamma), ("tau1", self.tau1), ("tau2", self.tau2)] {
            if !(v >= 0.0) {
                return Err(domain(format!("{name} = {v} must be non-negative")));
            }
        }
        Ok(())
    }

    /// Total qubit count `N·M`.
    pub fn total_qubits(&self) -> usize {
        self.n_waveguides * self.qubits_per_guide
    }

    /// True when the photon passage time is short against the decay time,
    /// i.e. `(τ₁ + τ₂)·Γ ≤ margin`.
    pub fn passage_within_coherence(&self, margin: f64) -> bool {
        (self.tau1 + self.tau2) * self.gamma <= margin
    }
}

/// Rotation angles `(Δ, θ) = (τ₁·h_δ, τ₂·h_p)`.
pub fn derive_angles(tau1: f64, h_delta: f64, tau2: f64, h_p: f64) -> Result<(f64, f64)> {
    for (name, v) in [("tau1", tau1), ("h_delta", h_delta), ("tau2", tau2), ("h_p", h_p)] {
        if !(v >= 0.0) {
            return Err(domain(format!("{name} = {v} must be non-negative")));
        }
    }
    Ok((tau1 * h_delta, tau2 * h_p))
}

/// Bose–Einstein occupation `1/(e^x − 1)` for `x = ħω/k_BT`.
///
/// `x = +∞` (zero temperature) is accepted and gives 0.
pub fn bose_einstein(temperature_ratio: f64) -> Result<f64> {
    if !(temperature_ratio > 0.0) {
        return Err(domain(format!(
            "temperature ratio {temperature_ratio} must be positive"
        )));
    }
    Ok(1.0 / temperature_ratio.exp_m1())
}

/// Thermal environment of the array, one entry per waveguide mode `k_z`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    temperature_ratios: Vec<f64>,
    occupations: Vec<f64>,
}

impl NoiseSpec {
    /// Builds the spec from dimensionless ratios `ħω_kz/(k_B T)`.
    pub fn from_ratios(temperature_ratios: Vec<f64>) -> Result<Self> {
        if temperature_ratios.is_empty() {
            return Err(domain("noise spec needs at least one mode"));
        }
        let occupations = temperature_ratios
            .iter()
            .map(|&x| bose_einstein(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            temperature_ratios,
            occupations,
        })
    }

    /// Builds the spec from a temperature in kelvin and angular frequencies in rad/s.
    /// `temperature = 0` yields vacuum in every mode.
    pub fn from_temperature(temperature: f64, angular_frequencies: &[f64]) -> Result<Self> {
        if !(temperature >= 0.0) {
            return Err(domain(format!("temperature {temperature} must be non-negative")));
        }
        if let Some(w) = angular_frequencies.iter().find(|w| !(**w > 0.0)) {
            return Err(domain(format!("mode frequency {w} must be positive")));
        }
        let ratios = angular_frequencies
            .iter()
            .map(|&w| {
                if temperature == 0.0 {
                    f64::INFINITY
                } else {
                    HBAR * w / (BOLTZMANN * temperature)
                }
            })
            .collect();
        Self::from_ratios(ratios)
    }

    /// Linear dispersion `ω_kz = ω₀·k_z/M` for `k_z = 1..=M`.
    pub fn linear_dispersion(omega0: f64, modes: usize) -> Vec<f64> {
        (1..=modes)
            .map(|k| omega0 * k as f64 / modes as f64)
            .collect()
    }

    pub fn temperature_ratios(&self) -> &[f64] {
        &self.temperature_ratios
    }

    /// Per-mode occupations `f_kz`.
    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    /// Mean occupation `f̄`.
    pub fn mean_occupation(&self) -> f64 {
        self.occupations.iter().sum::<f64>() / self.occupations.len() as f64
    }
}

/// `f_T = (1 − η)·f̄`, the only noise combination the closed forms depend on.
pub fn effective_noise_fraction(noise: &NoiseSpec, eta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(domain(format!("eta = {eta} outside [0, 1]")));
    }
    Ok((1.0 - eta) * noise.mean_occupation())
}

/// 2×2 qubit density matrix in the `(|1⟩, |0⟩)` ordering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensityMatrix {
    pub data: [[C64; 2]; 2],
}

impl QubitDensityMatrix {
    pub fn new(data: [[C64; 2]; 2]) -> Self {
        Self { data }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let h = C64::new(0.5, 0.0);
        Self::new([[h, h], [h, h]])
    }

    pub fn ground() -> Self {
        let zero = C64::new(0.0, 0.0);
        Self::new([[zero, zero], [zero, C64::new(1.0, 0.0)]])
    }

    pub fn trace(&self) -> C64 {
        self.data[0][0] + self.data[1][1]
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let d = &self.data;
        [
            d[0][0].im.abs(),
            d[1][1].im.abs(),
            (d[0][1] - d[1][0].conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order (Hermitian part only).
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.data[0][0].re;
        let d = self.data[1][1].re;
        let b = 0.5 * (self.data[0][1] + self.data[1][0].conj());
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        [mean - radius, mean + radius]
    }

    /// `Tr(ρ·op)`.
    pub fn expectation(&self, op: &[[C64; 2]; 2]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                acc += self.data[i][j] * op[j][i];
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.data[i][j] - other.data[i][j]).norm());
            }
        }
        worst
    }
}

/// Pauli matrices in the `(|1⟩, |0⟩)` ordering.
pub mod pauli {
    use num_complex::Complex64 as C64;

    const O: C64 = C64::new(0.0, 0.0);
    const I: C64 = C64::new(1.0, 0.0);
    const J: C64 = C64::new(0.0, 1.0);

    pub const IDENTITY: [[C64; 2]; 2] = [[I, O], [O, I]];
    pub const X: [[C64; 2]; 2] = [[O, I], [I, O]];
    pub const Y: [[C64; 2]; 2] = [[O, C64::new(0.0, -1.0)], [J, O]];
    pub const Z: [[C64; 2]; 2] = [[I, O], [O, C64::new(-1.0, 0.0)]];
}

/// Qubit state after decaying for time `t` from `(|0⟩ + |1⟩)/√2`:
/// `ρ = ½[e^{−Γt}σ^x + (e^{−2Γt} − 1)σ^z + 𝟙]`.
pub fn decayed_qubit_state(gamma: f64, t: f64) -> Result<QubitDensityMatrix> {
    if !(gamma >= 0.0) || !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "decay rate {gamma} and time {t} must be non-negative"
        )));
    }
    let coherence = (-gamma * t).exp();
    let excited = (-2.0 * gamma * t).exp();
    let mut data = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            data[i][j] = 0.5
                * (coherence * pauli::X[i][j]
                    + (excited - 1.0) * pauli::Z[i][j]
                    + pauli::IDENTITY[i][j]);
        }
    }
    Ok(QubitDensityMatrix::new(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn angles_are_products() {
        let (d, t) = derive_angles(1.0, 0.05, 1.0, 0.3).unwrap();
        assert_abs_diff_eq!(d, 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(t, 0.3, epsilon = 1e-15);
        assert_eq!(derive_angles(0.0, 7.0, 0.0, 9.0).unwrap(), (0.0, 0.0));
        let (d, t) = derive_angles(2.0, 0.01, 0.5, 0.2).unwrap();
        assert_abs_diff_eq!(d, 0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(t, 0.1, epsilon = 1e-15);
        assert!(matches!(
            derive_angles(-1.0, 0.1, 1.0, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bose_einstein_values() {
        assert!(bose_einstein(700.0).unwrap() < 1e-300);
        assert_eq!(bose_einstein(f64::INFINITY).unwrap(), 0.0);
        assert_abs_diff_eq!(bose_einstein(2f64.ln()).unwrap(), 1.0, epsilon = 1e-14);
        // series 1/x − 1/2 + x/12 − x³/720
        let x: f64 = 0.1;
        let series = 1.0 / x - 0.5 + x / 12.0 - x.powi(3) / 720.0;
        assert_abs_diff_eq!(bose_einstein(x).unwrap(), series, epsilon = 1e-8);
        assert_abs_diff_eq!(bose_einstein(x).unwrap(), 9.508_331_944_775_05, epsilon = 1e-12);
        assert!(bose_einstein(0.0).is_err());
        assert!(bose_einstein(-1.0).is_err());
        assert!(bose_einstein(f64::NAN).is_err());
    }

    #[test]
    fn bose_einstein_decreasing_and_divergent() {
        let values: Vec<f64> = (1..=20)
            .map(|k| bose_einstein(0.01 * k as f64).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[0] > w[1]));
        assert!(bose_einstein(1e-3).unwrap() > 999.0);
    }

    #[test]
    fn noise_fraction() {
        let uniform = NoiseSpec::from_ratios(vec![(1.0f64 / 0.4 + 1.0).ln(); 3]).unwrap();
        assert_abs_diff_eq!(uniform.mean_occupation(), 0.4, epsilon = 1e-14);
        assert_eq!(effective_noise_fraction(&uniform, 1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            effective_noise_fraction(&uniform, 0.5).unwrap(),
            0.2,
            epsilon = 1e-14
        );

        let two = NoiseSpec::from_ratios(vec![(11.0f64).ln(), (1.0f64 / 0.3 + 1.0).ln()]).unwrap();
        assert_abs_diff_eq!(
            effective_noise_fraction(&two, 0.9).unwrap(),
            0.02,
            epsilon = 1e-14
        );
        assert!(NoiseSpec::from_ratios(vec![]).is_err());
        assert!(effective_noise_fraction(&two, 1.5).is_err());
    }

    #[test]
    fn zero_temperature_is_vacuum() {
        let omegas = NoiseSpec::linear_dispersion(2.0 * std::f64::consts::PI * 5e9, 4);
        let cold = NoiseSpec::from_temperature(0.0, &omegas).unwrap();
        assert_eq!(cold.mean_occupation(), 0.0);
        assert_eq!(effective_noise_fraction(&cold, 0.3).unwrap(), 0.0);

        let warm = NoiseSpec::from_temperature(0.05, &omegas).unwrap();
        let expected: f64 = omegas
            .iter()
            .map(|w| 1.0 / ((HBAR * w / (BOLTZMANN * 0.05)).exp() - 1.0))
            .sum::<f64>()
            / 4.0;
        assert_abs_diff_eq!(warm.mean_occupation(), expected, epsilon = 1e-12);
        assert!(warm.occupations().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn noise_fraction_monotone() {
        let base = NoiseSpec::from_ratios(vec![0.5, 1.0, 2.0]).unwrap();
        let hotter = NoiseSpec::from_ratios(vec![0.4, 1.0, 2.0]).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..=20 {
            let eta = k as f64 / 20.0;
            let f = effective_noise_fraction(&base, eta).unwrap();
            assert!(f <= prev);
            assert!(effective_noise_fraction(&hotter, eta).unwrap() >= f);
            prev = f;
        }
    }

    #[test]
    fn decay_limits() {
        let fresh = decayed_qubit_state(3.0, 0.0).unwrap();
        assert!(fresh.max_abs_diff(&QubitDensityMatrix::plus()) < 1e-15);
        let relaxed = decayed_qubit_state(1.0, 50.0).unwrap();
        assert!(relaxed.max_abs_diff(&QubitDensityMatrix::ground()) < 1e-15);
        assert!(decayed_qubit_state(-1.0, 1.0).is_err());
    }

    #[test]
    fn decay_eigenvalues_against_dense_solver() {
        let rho = decayed_qubit_state(1.0, 0.5).unwrap();
        let m = nalgebra::Matrix2::from_fn(|i, j| rho.data[i][j]);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let x = (-1.0f64).exp();
        let r = (x + (x - 1.0).powi(2)).sqrt();
        assert_abs_diff_eq!(ev[0], 0.5 * (1.0 - r), epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 0.5 * (1.0 + r), epsilon = 1e-14);
        let closed = rho.eigenvalues();
        assert_abs_diff_eq!(closed[0], ev[0], epsilon = 1e-14);
        assert_abs_diff_eq!(closed[1], ev[1], epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1], 0.938, epsilon = 5e-4);
    }

    #[test]
    fn decay_valid_state_on_grid() {
        for k in 0..=1000 {
            let rho = decayed_qubit_state(1.0, k as f64 * 0.01).unwrap();
            assert!((rho.trace() - 1.0).norm() < 1e-14);
            assert!(rho.hermiticity_error() < 1e-15);
            let [lo, hi] = rho.eigenvalues();
            assert!(lo >= -1e-12 && hi <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn params_validation() {
        assert!(DetectorParams::new(1, 1, 0.3, 0.1, 0.5).is_ok());
        assert!(DetectorParams::new(0, 1, 0.3, 0.1, 0.5).is_err());
        assert!(DetectorParams::new(1, 0, 0.3, 0.1, 0.5).is_err());
        assert!(DetectorParams::new(1, 1, 0.3, 0.1, 1.1).is_err());
        let p = DetectorParams::new(2, 3, 0.3, 0.1, 0.5).unwrap();
        assert_eq!(p.total_qubits(), 6);
        assert!(p.with_timing(-1.0, 0.0, 0.0).is_err());
        let timed = p.with_timing(1e6, 1e-9, 1e-9).unwrap();
        assert!(timed.passage_within_coherence(0.01));
        assert!(!timed.passage_within_coherence(1e-4));
    }
}
