//! Readout gain `R = |⟨S^x⟩| / ⟨(S^z)²⟩^{1/2}` for correlated qubits.
//!
//! Two coupling geometries are covered: the all-to-all "giant spin"
//! Hamiltonian `(S^z)² + λS^x`, solved in the `M + 1` dimensional Dicke
//! basis, and the periodic nearest-neighbour Ising ring, solved on the full
//! register. Closed-form perturbative gains sit next to the numerics.

mod chain;
mod dicke;
pub mod eigen;

pub use chain::{
    nn_ising_ground_state, nn_ising_hamiltonian, RegisterState, DENSE_CHAIN_QUBITS,
    DEFAULT_MAX_CHAIN_QUBITS,
};
pub use dicke::{
    giant_spin_ground_state, giant_spin_hamiltonian, spin_matrices, sx_coupling, sx_matrix,
    sz_diagonal, DickeState,
};

use num_complex::Complex64 as C64;

use crate::error::{domain, Error, Result};

/// States are rejected when `|‖ψ‖² − 1|` exceeds this.
pub const NORM_TOL: f64 = 1e-10;

/// `⟨(S^z)²⟩` at or below this is treated as zero.
const ZERO_SECOND_MOMENT: f64 = 1e-28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollectiveOp {
    Sx,
    Sz,
    Sz2,
}

/// A normalized state on which the collective operators `S^i = Σ_μ σ^i_μ/2` act.
pub trait CollectiveState {
    fn norm_sqr(&self) -> f64;
    fn raw_expectation(&self, op: CollectiveOp) -> f64;
}

impl CollectiveState for DickeState {
    fn norm_sqr(&self) -> f64 {
        DickeState::norm_sqr(self)
    }

    fn raw_expectation(&self, op: CollectiveOp) -> f64 {
        let a = self.amplitudes();
        match op {
            CollectiveOp::Sx => (0..self.qubits())
                .map(|i| 2.0 * sx_coupling(self.qubits(), i) * (a[i + 1].conj() * a[i]).re)
                .sum(),
            CollectiveOp::Sz => a
                .iter()
                .enumerate()
                .map(|(i, x)| self.m(i) * x.norm_sqr())
                .sum(),
            CollectiveOp::Sz2 => a
                .iter()
                .enumerate()
                .map(|(i, x)| self.m(i).powi(2) * x.norm_sqr())
                .sum(),
        }
    }
}

impl CollectiveState for RegisterState {
    fn norm_sqr(&self) -> f64 {
        RegisterState::norm_sqr(self)
    }

    fn raw_expectation(&self, op: CollectiveOp) -> f64 {
        let a = self.amplitudes();
        let m = self.qubits();
        let sz = |i: usize| i.count_ones() as f64 - 0.5 * m as f64;
        match op {
            CollectiveOp::Sx => {
                let mut acc = C64::new(0.0, 0.0);
                for (i, x) in a.iter().enumerate() {
                    for q in 0..m {
                        acc += a[i ^ (1 << q)].conj() * x;
                    }
                }
                0.5 * acc.re
            }
            CollectiveOp::Sz => a.iter().enumerate().map(|(i, x)| sz(i) * x.norm_sqr()).sum(),
            CollectiveOp::Sz2 => a
                .iter()
                .enumerate()
                .map(|(i, x)| sz(i).powi(2) * x.norm_sqr())
                .sum(),
        }
    }
}

/// Expectation of a collective operator; the state must be normalized.
pub fn collective_state_expectation<S: CollectiveState + ?Sized>(
    state: &S,
    op: CollectiveOp,
) -> Result<f64> {
    let n = state.norm_sqr();
    if (n - 1.0).abs() > NORM_TOL {
        return Err(domain(format!("state not normalized: norm² = {n}")));
    }
    Ok(state.raw_expectation(op))
}

/// Which fluctuation measure sits in the gain denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainDefinition {
    /// `⟨(S^z)²⟩`.
    #[default]
    SecondMoment,
    /// `⟨(S^z)²⟩ − ⟨S^z⟩²`.
    Variance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinObservables {
    pub sx_mean: f64,
    pub sz_mean: f64,
    pub sz2_mean: f64,
    pub gain_r: f64,
}

/// Spin moments and `R = |⟨S^x⟩|/√⟨(S^z)²⟩`.
pub fn gain_from_state<S: CollectiveState + ?Sized>(state: &S) -> Result<SpinObservables> {
    gain_with_definition(state, GainDefinition::SecondMoment)
}

pub fn gain_with_definition<S: CollectiveState + ?Sized>(
    state: &S,
    definition: GainDefinition,
) -> Result<SpinObservables> {
    let sx_mean = collective_state_expectation(state, CollectiveOp::Sx)?;
    let sz_mean = state.raw_expectation(CollectiveOp::Sz);
    let sz2_mean = state.raw_expectation(CollectiveOp::Sz2);
    let denom = match definition {
        GainDefinition::SecondMoment => sz2_mean,
        GainDefinition::Variance => sz2_mean - sz_mean * sz_mean,
    };
    if denom <= ZERO_SECOND_MOMENT {
        return Err(Error::InfiniteGain { sz2: denom });
    }
    Ok(SpinObservables {
        sx_mean,
        sz_mean,
        sz2_mean,
        gain_r: sx_mean.abs() / denom.sqrt(),
    })
}

/// Perturbative giant-spin gain: `(M+1)/2` for odd `M`, `√(M(M/2+1))` for
/// even `M`, and the exact `√(2 + 2/√(1+4λ²))` for `M = 2`.
pub fn gain_giant_spin_closed_form(qubits: usize, lambda: f64) -> f64 {
    let m = qubits as f64;
    if qubits == 2 {
        (2.0 + 2.0 / (1.0 + 4.0 * lambda * lambda).sqrt()).sqrt()
    } else if qubits % 2 == 1 {
        0.5 * (m + 1.0)
    } else {
        (m * (0.5 * m + 1.0)).sqrt()
    }
}

/// Gain with `M_E` of `M` qubits in the giant-spin state:
/// `√(M_E(M_E/2 + 1) + M − M_E)`.
pub fn gain_partial_entanglement(qubits: usize, entangled: usize) -> Result<f64> {
    let spec = PartialEntanglementSpec::new(qubits, entangled)?;
    let (m, e) = (spec.qubits as f64, spec.entangled as f64);
    Ok((e * (0.5 * e + 1.0) + m - e).sqrt())
}

/// Nearest-neighbour ring gain: `√M` for even `M`, `λM/√(4 + λ²M)` for odd `M`.
pub fn gain_nn_ising(qubits: usize, lambda: f64) -> f64 {
    let m = qubits as f64;
    if qubits % 2 == 0 {
        m.sqrt()
    } else {
        lambda * m / (4.0 + lambda * lambda * m).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartialEntanglementSpec {
    pub qubits: usize,
    pub entangled: usize,
}

impl PartialEntanglementSpec {
    pub fn new(qubits: usize, entangled: usize) -> Result<Self> {
        if entangled > qubits {
            return Err(domain(format!(
                "entangled subset {entangled} larger than register {qubits}"
            )));
        }
        if entangled % 2 == 1 {
            return Err(domain(format!("entangled subset {entangled} must be even")));
        }
        Ok(Self { qubits, entangled })
    }

    /// Rounds `k·M` to the nearest even integer. The bool is true when that
    /// overshot `M` and was clamped down to the largest even value `≤ M`.
    pub fn from_fraction(qubits: usize, k: f64) -> Result<(Self, bool)> {
        if !(0.0..=1.0).contains(&k) {
            return Err(domain(format!("entangled fraction {k} outside [0, 1]")));
        }
        let nearest = 2 * (0.5 * k * qubits as f64).round() as usize;
        let clamped = nearest > qubits;
        let entangled = if clamped { qubits - qubits % 2 } else { nearest };
        Ok((Self { qubits, entangled }, clamped))
    }

    /// `k = M_E/M`.
    pub fn fraction(&self) -> f64 {
        self.entangled as f64 / self.qubits as f64
    }

    pub fn gain(&self) -> f64 {
        gain_partial_entanglement(self.qubits, self.entangled).expect("validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    GiantSpin,
    NearestNeighbour,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainSource {
    Numeric,
    /// Closed-form perturbative value, used where the numeric `⟨S^x⟩`
    /// vanishes identically (λ = 0).
    ClosedForm,
}

impl GainSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            GainSource::Numeric => "numeric",
            GainSource::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainEstimate {
    pub value: f64,
    pub source: GainSource,
}

/// Ising ground-state problem for one waveguide (periodic boundary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsingChainSpec {
    pub qubits: usize,
    pub lambda: f64,
    pub coupling: CouplingMode,
}

impl IsingChainSpec {
    pub fn new(qubits: usize, lambda: f64, coupling: CouplingMode) -> Result<Self> {
        if qubits < 2 {
            return Err(domain("Ising chain needs at least 2 qubits"));
        }
        if !(lambda >= 0.0) {
            return Err(domain(format!("lambda = {lambda} must be non-negative")));
        }
        Ok(Self {
            qubits,
            lambda,
            coupling,
        })
    }

    pub fn closed_form_gain(&self) -> f64 {
        match self.coupling {
            CouplingMode::GiantSpin => gain_giant_spin_closed_form(self.qubits, self.lambda),
            CouplingMode::NearestNeighbour => gain_nn_ising(self.qubits, self.lambda),
        }
    }

    /// Gain of the diagonalized ground state, falling back to the closed
    /// form at λ = 0. `max_chain_qubits` caps the nearest-neighbour register.
    pub fn gain(&self, max_chain_qubits: usize) -> Result<GainEstimate> {
        if self.lambda == 0.0 {
            return Ok(GainEstimate {
                value: self.closed_form_gain(),
                source: GainSource::ClosedForm,
            });
        }
        let obs = match self.coupling {
            CouplingMode::GiantSpin => {
                gain_from_state(&giant_spin_ground_state(self.qubits, self.lambda).0)?
            }
            CouplingMode::NearestNeighbour => {
                let (state, _) = nn_ising_ground_state(self.qubits, self.lambda, max_chain_qubits)?;
                gain_from_state(&state)?
            }
        };
        Ok(GainEstimate {
            value: obs.gain_r,
            source: GainSource::Numeric,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn two_qubit_ground_energy() {
        for &lam in &[0.0, 0.01, 0.3, 1.0, 7.5] {
            let (state, e) = giant_spin_ground_state(2, lam);
            assert_abs_diff_eq!(e, 0.5 * (1.0 - (1.0 + 4.0 * lam * lam).sqrt()), epsilon = 1e-12);
            // symmetric (a, b, a) profile
            let a = state.amplitudes();
            assert_abs_diff_eq!(a[0].re, a[2].re, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_qubit_tie_break_is_symmetric() {
        let (state, _) = giant_spin_ground_state(1, 0.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(state.amplitudes()[0].re, s, epsilon = 1e-12);
        assert_abs_diff_eq!(state.amplitudes()[1].re, s, epsilon = 1e-12);
    }

    #[test]
    fn weak_field_concentrates_near_zero_m() {
        let (state, _) = giant_spin_ground_state(8, 0.01);
        assert!(state.weight_within(1.0) > 0.999);
    }

    #[test]
    fn gain_of_reference_states() {
        for m in [1, 2, 5, 16, 40] {
            let obs = gain_from_state(&DickeState::x_polarized(m, true)).unwrap();
            assert_relative_eq!(obs.gain_r, (m as f64).sqrt(), max_relative = 1e-10);
            assert_relative_eq!(obs.sx_mean, 0.5 * m as f64, max_relative = 1e-10);
        }
        for m in [3usize, 5, 9, 21] {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let mut amps = vec![C64::new(0.0, 0.0); m + 1];
            amps[m / 2] = C64::new(s, 0.0);
            amps[m / 2 + 1] = C64::new(s, 0.0);
            let obs = gain_from_state(&DickeState::new(m, amps).unwrap()).unwrap();
            assert_abs_diff_eq!(obs.sz2_mean, 0.25, epsilon = 1e-14);
            assert_relative_eq!(obs.sx_mean, (m as f64 + 1.0) / 4.0, max_relative = 1e-14);
            assert_relative_eq!(obs.gain_r, (m as f64 + 1.0) / 2.0, max_relative = 1e-14);
        }
        let flat = DickeState::basis(2, 0.0).unwrap();
        assert!(matches!(gain_from_state(&flat), Err(Error::InfiniteGain { .. })));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(gain_giant_spin_closed_form(3, 0.0), 2.0);
        assert_relative_eq!(gain_giant_spin_closed_form(4, 0.0), 12f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gain_giant_spin_closed_form(2, 0.0), 2.0, max_relative = 1e-15);
        assert_relative_eq!(gain_giant_spin_closed_form(2, 1e9), 2f64.sqrt(), max_relative = 1e-9);

        assert_relative_eq!(gain_partial_entanglement(10, 0).unwrap(), 10f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gain_partial_entanglement(10, 10).unwrap(), 60f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gain_partial_entanglement(10, 6).unwrap(), 28f64.sqrt(), max_relative = 1e-15);
        assert!(gain_partial_entanglement(10, 5).is_err());
        assert!(gain_partial_entanglement(10, 12).is_err());

        assert_eq!(gain_nn_ising(4, 0.05), 2.0);
        // λ²M = 0.09
        assert_abs_diff_eq!(gain_nn_ising(9, 0.1), 0.9 / 4.09f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(gain_nn_ising(9, 0.1), 0.445_021, epsilon = 1e-6);
        let lam = 1e-6;
        assert_relative_eq!(gain_nn_ising(9, lam) / lam, 4.5, max_relative = 1e-9);
    }

    #[test]
    fn partial_matches_full_entanglement_for_even_m() {
        for m in (2..=30).step_by(2) {
            assert_relative_eq!(
                gain_partial_entanglement(m, m).unwrap(),
                gain_giant_spin_closed_form(m, 0.0),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn fraction_rounding() {
        let (spec, clamped) = PartialEntanglementSpec::from_fraction(10, 0.5).unwrap();
        assert_eq!((spec.entangled, clamped), (6, false)); // 5 → nearest even rounds half up
        let (spec, clamped) = PartialEntanglementSpec::from_fraction(9, 1.0).unwrap();
        assert_eq!((spec.entangled, clamped), (8, true));
        let (spec, _) = PartialEntanglementSpec::from_fraction(12, 0.25).unwrap();
        assert_eq!(spec.entangled, 4); // 3 → 4
        assert!(PartialEntanglementSpec::from_fraction(12, 1.5).is_err());
    }

    #[test]
    fn expectation_of_simple_states() {
        for m in [2, 3, 6] {
            let plus = RegisterState::plus_product(m);
            assert_relative_eq!(
                collective_state_expectation(&plus, CollectiveOp::Sx).unwrap(),
                0.5 * m as f64,
                max_relative = 1e-12
            );
            let zero = DickeState::basis(2 * m, 0.0).unwrap();
            assert_eq!(collective_state_expectation(&zero, CollectiveOp::Sz).unwrap(), 0.0);
            assert_eq!(collective_state_expectation(&zero, CollectiveOp::Sz2).unwrap(), 0.0);
        }
        let neel = RegisterState::neel(4);
        for op in [CollectiveOp::Sx, CollectiveOp::Sz, CollectiveOp::Sz2] {
            assert_eq!(collective_state_expectation(&neel, op).unwrap(), 0.0);
        }
        let bad = DickeState::new(1, vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        assert!(collective_state_expectation(&bad, CollectiveOp::Sx).is_err());
    }

    #[test]
    fn register_and_dicke_agree_on_symmetric_states() {
        // |+x⟩^M in both representations
        let m = 5;
        let reg = RegisterState::plus_product(m);
        let dicke = DickeState::x_polarized(m, true);
        for op in [CollectiveOp::Sx, CollectiveOp::Sz, CollectiveOp::Sz2] {
            assert_abs_diff_eq!(
                collective_state_expectation(&reg, op).unwrap(),
                collective_state_expectation(&dicke, op).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn variance_definition_is_available() {
        let (state, _) = giant_spin_ground_state(4, 0.2);
        let a = gain_with_definition(&state, GainDefinition::SecondMoment).unwrap();
        let b = gain_with_definition(&state, GainDefinition::Variance).unwrap();
        // ⟨S^z⟩ = 0 on the ground state, so both agree
        assert_abs_diff_eq!(a.sz_mean, 0.0, epsilon = 1e-12);
        assert_relative_eq!(a.gain_r, b.gain_r, max_relative = 1e-10);
    }

    #[test]
    fn chain_spec_falls_back_at_zero_field() {
        let spec = IsingChainSpec::new(6, 0.0, CouplingMode::GiantSpin).unwrap();
        let g = spec.gain(14).unwrap();
        assert_eq!(g.source, GainSource::ClosedForm);
        assert_relative_eq!(g.value, 24f64.sqrt(), max_relative = 1e-15);
        let spec = IsingChainSpec::new(6, 0.05, CouplingMode::NearestNeighbour).unwrap();
        let g = spec.gain(14).unwrap();
        assert_eq!(g.source, GainSource::Numeric);
        assert!((g.value / 6f64.sqrt() - 1.0).abs() < 0.05);
        assert!(IsingChainSpec::new(1, 0.1, CouplingMode::GiantSpin).is_err());
    }
}
