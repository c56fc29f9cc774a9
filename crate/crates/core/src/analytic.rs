//! Closed-form detector response for uncorrelated qubits.
//!
//! Everything here depends on the thermal environment only through the
//! effective noise fraction `f_T`. Photon counts other than 0 and 1 are
//! reachable only through [`phase_expectation`].

use num_complex::Complex64 as C64;

use crate::error::{domain, Error, Result};
use crate::model::DetectorParams;

/// `⟨exp(iθ n̂′)⟩ₙ` for the photon number `n̂′` seen by one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseExpectation {
    pub value: C64,
}

impl PhaseExpectation {
    /// `⟨sin(θ n̂′)⟩ₙ`.
    pub fn sin_part(&self) -> f64 {
        self.value.im
    }

    /// `⟨cos(θ n̂′)⟩ₙ`.
    pub fn cos_part(&self) -> f64 {
        self.value.re
    }
}

/// `1 + f_T(1 − e^{iθ})`. Its modulus is at least 1 for `f_T ≥ 0`.
pub fn thermal_denominator(theta: f64, f_t: f64) -> C64 {
    1.0 + f_t * (1.0 - C64::from_polar(1.0, theta))
}

/// Phase expectation for `n` signal photons spread over `n_waveguides` guides:
///
/// `[1 + f_T(1−e^{iθ})]^{-1} · [1 + η(e^{iθ}−1) / (N·[1 + f_T(1−e^{iθ})])]^n`.
pub fn phase_expectation(
    n: u32,
    theta: f64,
    eta: f64,
    n_waveguides: usize,
    f_t: f64,
) -> PhaseExpectation {
    let denom = thermal_denominator(theta, f_t);
    let step = eta * (C64::from_polar(1.0, theta) - 1.0) / (n_waveguides as f64 * denom);
    let mut value = denom.inv();
    for _ in 0..n {
        value *= 1.0 + step;
    }
    PhaseExpectation { value }
}

/// `|1 + f_T(1−e^{iθ})|² = [1 + f_T(1−cosθ)]² + f_T² sin²θ`.
fn thermal_norm_sqr(theta: f64, f_t: f64) -> f64 {
    let a = 1.0 + f_t * (1.0 - theta.cos());
    let b = f_t * theta.sin();
    a * a + b * b
}

/// `⟨sin(θ n̂′)⟩₀ = f_T sinθ / {[1 + f_T(1−cosθ)]² + f_T² sin²θ}`.
pub fn sin_expectation_0(theta: f64, f_t: f64) -> f64 {
    f_t * theta.sin() / thermal_norm_sqr(theta, f_t)
}

/// Single-photon increment `⟨sin⟩₁ − ⟨sin⟩₀`; scales exactly as `η/N`.
pub fn single_photon_increment(theta: f64, eta: f64, n_waveguides: usize, f_t: f64) -> f64 {
    let q = thermal_norm_sqr(theta, f_t);
    let u = 1.0 - theta.cos();
    eta * theta.sin() * (1.0 - 2.0 * u * f_t * f_t) / (n_waveguides as f64 * q * q)
}

/// `⟨sin(θ n̂′)⟩₁`.
pub fn sin_expectation_1(theta: f64, eta: f64, n_waveguides: usize, f_t: f64) -> f64 {
    sin_expectation_0(theta, f_t) + single_photon_increment(theta, eta, n_waveguides, f_t)
}

/// `⟨sin(θ n̂′)⟩ₙ` using the closed forms for `n ≤ 1` and the general
/// phase expectation beyond.
pub fn sin_expectation(n: u32, theta: f64, eta: f64, n_waveguides: usize, f_t: f64) -> f64 {
    match n {
        0 => sin_expectation_0(theta, f_t),
        1 => sin_expectation_1(theta, eta, n_waveguides, f_t),
        _ => phase_expectation(n, theta, eta, n_waveguides, f_t).sin_part(),
    }
}

/// Array magnetization `⟨S′^z⟩ = (NM/2)·sinΔ·⟨sin(θ n̂′)⟩ₙ`.
pub fn mean_collective_spin(params: &DetectorParams, f_t: f64, n: u32) -> f64 {
    let s = sin_expectation(n, params.theta, params.eta, params.n_waveguides, f_t);
    0.5 * params.total_qubits() as f64 * params.delta.sin() * s
}

/// Leading-order fluctuation `⟨δ²S′^z⟩ = NM/4`; corrections are `O(Δ)`.
pub fn collective_variance(params: &DetectorParams) -> f64 {
    0.25 * params.total_qubits() as f64
}

/// Small-Δ signal-to-noise ratio `R·√N·Δ·⟨sin(θ n̂′)⟩ₙ`.
///
/// `gain = √M` is the standard quantum limit.
pub fn snr(n: u32, params: &DetectorParams, f_t: f64, gain: f64) -> f64 {
    let s = sin_expectation(n, params.theta, params.eta, params.n_waveguides, f_t);
    gain * (params.n_waveguides as f64).sqrt() * params.delta * s
}

/// Contrast `C = (⟨sin⟩₁ − ⟨sin⟩₀)/(⟨sin⟩₁ + ⟨sin⟩₀)`.
///
/// Fails with [`Error::UndefinedContrast`] where the denominator vanishes,
/// which includes θ = 0 and θ = π.
pub fn contrast(theta: f64, eta: f64, n_waveguides: usize, f_t: f64) -> Result<f64> {
    if theta.sin().abs() < 1e-12 {
        return Err(Error::UndefinedContrast { theta });
    }
    let s0 = sin_expectation_0(theta, f_t);
    let s1 = sin_expectation_1(theta, eta, n_waveguides, f_t);
    let sum = s0 + s1;
    let c = (s1 - s0) / sum;
    if sum == 0.0 || !c.is_finite() {
        return Err(Error::UndefinedContrast { theta });
    }
    Ok(c)
}

/// `(N/η)·2C/(1−C) = [1 − 2(1−cosθ)f_T²] / (f_T[1 + 2(1−cosθ)(f_T + f_T²)])`,
/// independent of η and N.
pub fn renormalized_contrast(theta: f64, f_t: f64) -> Result<f64> {
    if f_t == 0.0 {
        return Err(Error::Divergent(
            "renormalized contrast diverges at f_T = 0".into(),
        ));
    }
    if f_t < 0.0 {
        return Err(domain(format!("f_T = {f_t} must be non-negative")));
    }
    let u = 1.0 - theta.cos();
    Ok((1.0 - 2.0 * u * f_t * f_t) / (f_t * (1.0 + 2.0 * u * (f_t + f_t * f_t))))
}

/// Noise level `1/√(2(1−cosθ))` above which the contrast turns negative.
pub fn negative_contrast_threshold(theta: f64) -> Result<f64> {
    let tau = std::f64::consts::TAU;
    if !(theta > 0.0 && theta < tau) {
        return Err(domain(format!(
            "theta = {theta} outside (0, 2π): threshold is infinite"
        )));
    }
    let u = 1.0 - theta.cos();
    if u <= 0.0 {
        return Err(domain("threshold is infinite for cos θ = 1"));
    }
    Ok(1.0 / (2.0 * u).sqrt())
}
