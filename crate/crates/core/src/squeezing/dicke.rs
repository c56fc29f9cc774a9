//! Collective spin of one waveguide in the Dicke basis `|l, m⟩`, `l = M/2`.
//!
//! Basis index `i = 0..=M` maps to `m = i − l`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::eigen::{dense_ground_space, select_ground_vector};

/// State of the symmetric (`l = M/2`) subspace of `M` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeState {
    qubits: usize,
    amplitudes: Vec<C64>,
}

impl DickeState {
    /// Wraps amplitudes `α_m` ordered by ascending `m`. Returns `None` when the
    /// length is not `M + 1`.
    pub fn new(qubits: usize, amplitudes: Vec<C64>) -> Option<Self> {
        (amplitudes.len() == qubits + 1).then_some(Self { qubits, amplitudes })
    }

    /// `|M/2, m⟩`; `None` unless `m ∈ {−l, …, l}`.
    pub fn basis(qubits: usize, m: f64) -> Option<Self> {
        let i = m + 0.5 * qubits as f64;
        if i < 0.0 || i > qubits as f64 || i.fract() != 0.0 {
            return None;
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); qubits + 1];
        amplitudes[i as usize] = C64::new(1.0, 0.0);
        Some(Self { qubits, amplitudes })
    }

    /// Product state with every qubit along `±x`: the `λ → ∞` limit, `Sx = ±M/2`.
    pub fn x_polarized(qubits: usize, positive: bool) -> Self {
        // ⟨m|x⟩ = sqrt(binom(M, i)) / 2^{M/2}, alternating sign for −x
        let mut log_binom = 0.0f64;
        let amplitudes = (0..=qubits)
            .map(|i| {
                if i > 0 {
                    log_binom += ((qubits - i + 1) as f64).ln() - (i as f64).ln();
                }
                let mag = (0.5 * log_binom - 0.5 * qubits as f64 * std::f64::consts::LN_2).exp();
                let sign = if positive || (qubits - i) % 2 == 0 { 1.0 } else { -1.0 };
                C64::new(sign * mag, 0.0)
            })
            .collect();
        Self { qubits, amplitudes }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Total spin `l = M/2`.
    pub fn l(&self) -> f64 {
        0.5 * self.qubits as f64
    }

    /// `m` label of basis index `i`.
    pub fn m(&self, i: usize) -> f64 {
        i as f64 - self.l()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `Σ_{|m| ≤ bound} |α_m|²`.
    pub fn weight_within(&self, bound: f64) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| self.m(*i).abs() <= bound + 1e-12)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// `⟨m+1|S^x|m⟩ = ½√(l(l+1) − m(m+1))` for index `i` (`m = i − l`), `i < M`.
pub fn sx_coupling(qubits: usize, i: usize) -> f64 {
    let l = 0.5 * qubits as f64;
    let m = i as f64 - l;
    0.5 * (l * (l + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// `S^z` eigenvalues `m = −l..=l`.
pub fn sz_diagonal(qubits: usize) -> Vec<f64> {
    let l = 0.5 * qubits as f64;
    (0..=qubits).map(|i| i as f64 - l).collect()
}

pub fn sx_matrix(qubits: usize) -> DMatrix<f64> {
    let dim = qubits + 1;
    DMatrix::from_fn(dim, dim, |r, c| {
        if r == c + 1 {
            sx_coupling(qubits, c)
        } else if c == r + 1 {
            sx_coupling(qubits, r)
        } else {
            0.0
        }
    })
}

/// Complex `(S^x, S^y, S^z)` in the Dicke basis.
pub fn spin_matrices(qubits: usize) -> [DMatrix<C64>; 3] {
    let dim = qubits + 1;
    let sx = sx_matrix(qubits).map(|x| C64::new(x, 0.0));
    // S^y = (S⁺ − S⁻)/(2i); S⁺ raises m
    let sy = DMatrix::from_fn(dim, dim, |r, c| {
        if r == c + 1 {
            C64::new(0.0, -sx_coupling(qubits, c))
        } else if c == r + 1 {
            C64::new(0.0, sx_coupling(qubits, r))
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let sz = DMatrix::from_diagonal(&DVector::from_vec(
        sz_diagonal(qubits).into_iter().map(|m| C64::new(m, 0.0)).collect(),
    ));
    [sx, sy, sz]
}

/// `Ĥ = (S^z)² + λ S^x` in the Dicke basis.
pub fn giant_spin_hamiltonian(qubits: usize, lambda: f64) -> DMatrix<f64> {
    let mut h = sx_matrix(qubits) * lambda;
    for (i, m) in sz_diagonal(qubits).into_iter().enumerate() {
        h[(i, i)] = m * m;
    }
    h
}

pub(crate) fn apply_sx(qubits: usize, x: &DVector<f64>, y: &mut DVector<f64>) {
    y.fill(0.0);
    for i in 0..qubits {
        let c = sx_coupling(qubits, i);
        y[i + 1] += c * x[i];
        y[i] += c * x[i + 1];
    }
}

/// Ground state of `(S^z)² + λ S^x` and its energy.
///
/// Degenerate ground spaces (λ = 0) resolve to the `S^x` eigenvector with the
/// largest eigenvalue inside the space.
pub fn giant_spin_ground_state(qubits: usize, lambda: f64) -> (DickeState, f64) {
    let space = dense_ground_space(giant_spin_hamiltonian(qubits, lambda));
    let v = select_ground_vector(&space, |x, y| apply_sx(qubits, x, y));
    let amplitudes = v.iter().map(|&a| C64::new(a, 0.0)).collect();
    (DickeState { qubits, amplitudes }, space.energy)
}
