//! Nearest-neighbour transverse-field Ising ring on the full `2^M` register.
//!
//! Basis index bit `μ` set means qubit `μ` is in `|1⟩` (σ^z = +1).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::eigen::{dense_ground_space, lanczos_ground_space, select_ground_vector, GroundSpace};
use crate::error::{domain, Error, Result};

/// Default cap on the ring length for exact diagonalization.
pub const DEFAULT_MAX_CHAIN_QUBITS: usize = 14;

/// Rings up to this length are diagonalized densely; longer ones use Lanczos.
pub const DENSE_CHAIN_QUBITS: usize = 8;

/// Amplitudes over the full `M`-qubit computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    qubits: usize,
    amplitudes: Vec<C64>,
}

impl RegisterState {
    pub fn new(qubits: usize, amplitudes: Vec<C64>) -> Option<Self> {
        (amplitudes.len() == 1usize << qubits).then_some(Self { qubits, amplitudes })
    }

    /// Every qubit in `(|0⟩ + |1⟩)/√2`.
    pub fn plus_product(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        let a = C64::new((dim as f64).sqrt().recip(), 0.0);
        Self {
            qubits,
            amplitudes: vec![a; dim],
        }
    }

    /// Single computational basis state.
    pub fn basis(qubits: usize, index: usize) -> Option<Self> {
        let dim = 1usize << qubits;
        (index < dim).then(|| {
            let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
            amplitudes[index] = C64::new(1.0, 0.0);
            Self { qubits, amplitudes }
        })
    }

    /// Néel state with qubit 0 in `|1⟩`.
    pub fn neel(qubits: usize) -> Self {
        let index = (0..qubits).step_by(2).fold(0usize, |acc, q| acc | (1 << q));
        Self::basis(qubits, index).expect("index within register")
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Diagonal part `Σ_μ σ^z_{μ+1}σ^z_μ / 2` with periodic boundary.
fn bond_energy(qubits: usize, index: usize) -> f64 {
    let spin = |q: usize| if index >> (q % qubits) & 1 == 1 { 1.0 } else { -1.0 };
    0.5 * (0..qubits).map(|q| spin(q) * spin(q + 1)).sum::<f64>()
}

fn apply_sigma_x_sum(qubits: usize, x: &DVector<f64>, y: &mut DVector<f64>) {
    y.fill(0.0);
    for i in 0..x.len() {
        let xi = x[i];
        for q in 0..qubits {
            y[i ^ (1 << q)] += xi;
        }
    }
}

fn apply_hamiltonian(
    qubits: usize,
    lambda: f64,
    diag: &[f64],
    x: &DVector<f64>,
    y: &mut DVector<f64>,
) {
    apply_sigma_x_sum(qubits, x, y);
    for i in 0..x.len() {
        y[i] = 0.5 * lambda * y[i] + diag[i] * x[i];
    }
}

/// Dense `Ĥ = Σ_μ [σ^z_{μ+1}σ^z_μ + λσ^x_μ]/2`.
pub fn nn_ising_hamiltonian(qubits: usize, lambda: f64) -> DMatrix<f64> {
    let dim = 1usize << qubits;
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        h[(i, i)] = bond_energy(qubits, i);
        for q in 0..qubits {
            h[(i ^ (1 << q), i)] += 0.5 * lambda;
        }
    }
    h
}

fn ground_space(qubits: usize, lambda: f64) -> Result<GroundSpace> {
    let dim = 1usize << qubits;
    let diag: Vec<f64> = (0..dim).map(|i| bond_energy(qubits, i)).collect();
    if lambda == 0.0 {
        let energy = diag.iter().copied().fold(f64::INFINITY, f64::min);
        let vectors = diag
            .iter()
            .enumerate()
            .filter(|(_, &e)| e == energy)
            .map(|(i, _)| {
                let mut v = DVector::zeros(dim);
                v[i] = 1.0;
                v
            })
            .collect();
        return Ok(GroundSpace { energy, vectors });
    }
    if qubits <= DENSE_CHAIN_QUBITS {
        return Ok(dense_ground_space(nn_ising_hamiltonian(qubits, lambda)));
    }
    // near the fully −x polarized state, slightly perturbed so no symmetry sector is missed
    let start = DVector::from_fn(dim, |i, _| {
        let sign = if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        sign * (1.0 + 0.05 * (i as f64 * 0.618_033_988_75).fract())
    });
    lanczos_ground_space(
        dim,
        |x, y| apply_hamiltonian(qubits, lambda, &diag, x, y),
        start,
        600,
        1e-11,
    )
}

/// Ground state of the periodic nearest-neighbour ring.
///
/// `max_qubits` caps the register size. Ties inside a degenerate ground
/// space are resolved by `S^x`, then by lowest basis index.
pub fn nn_ising_ground_state(
    qubits: usize,
    lambda: f64,
    max_qubits: usize,
) -> Result<(RegisterState, f64)> {
    if qubits < 2 {
        return Err(domain("Ising ring needs at least 2 qubits"));
    }
    if !(lambda >= 0.0) {
        return Err(domain(format!("lambda = {lambda} must be non-negative")));
    }
    if qubits > max_qubits {
        return Err(Error::Resource {
            qubits,
            max: max_qubits,
        });
    }
    let space = ground_space(qubits, lambda)?;
    let v = select_ground_vector(&space, |x, y| apply_sigma_x_sum(qubits, x, y));
    let amplitudes = v.iter().map(|&a| C64::new(a, 0.0)).collect();
    Ok((RegisterState { qubits, amplitudes }, space.energy))
}
