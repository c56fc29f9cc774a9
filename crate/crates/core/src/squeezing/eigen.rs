//! Ground spaces of real symmetric Hamiltonians and the deterministic
//! choice of one ground vector inside a degenerate space.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalues closer than this to the lowest one are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Lowest eigenvalue together with an orthonormal basis of its eigenspace.
#[derive(Debug, Clone)]
pub struct GroundSpace {
    pub energy: f64,
    pub vectors: Vec<DVector<f64>>,
}

impl GroundSpace {
    pub fn degeneracy(&self) -> usize {
        self.vectors.len()
    }
}

fn degenerate_with(energy: f64, e: f64) -> bool {
    (e - energy).abs() <= DEGENERACY_TOL * energy.abs().max(1.0)
}

/// Ascending eigenpairs of a symmetric matrix.
fn sorted_eigen(h: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

pub fn dense_ground_space(h: DMatrix<f64>) -> GroundSpace {
    let (values, vectors) = sorted_eigen(h);
    let energy = values[0];
    let vectors = values
        .iter()
        .enumerate()
        .take_while(|(_, &e)| degenerate_with(energy, e))
        .map(|(i, _)| vectors.column(i).into_owned())
        .collect();
    GroundSpace { energy, vectors }
}

/// Lanczos with full reorthogonalization. Returns every converged Ritz pair
/// degenerate with the lowest one.
pub fn lanczos_ground_space<F>(
    dim: usize,
    matvec: F,
    start: DVector<f64>,
    max_iter: usize,
    tol: f64,
) -> Result<GroundSpace>
where
    F: Fn(&DVector<f64>, &mut DVector<f64>),
{
    let max_iter = max_iter.min(dim).max(1);
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(max_iter);
    let mut alpha = Vec::with_capacity(max_iter);
    let mut beta: Vec<f64> = Vec::with_capacity(max_iter);

    let mut v = start;
    v /= v.norm();
    let mut w = DVector::zeros(dim);
    let mut last_residual = f64::INFINITY;

    for j in 0..max_iter {
        matvec(&v, &mut w);
        let a = v.dot(&w);
        w.axpy(-a, &v, 1.0);
        if let Some(prev) = basis.last() {
            w.axpy(-beta[j - 1], prev, 1.0);
        }
        basis.push(v.clone());
        alpha.push(a);
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&w);
                w.axpy(-c, q, 1.0);
            }
        }
        let b = w.norm();
        let exhausted = b < 1e-13 || j + 1 == max_iter;
        if (j + 1) % 5 == 0 || exhausted {
            let k = alpha.len();
            let t = DMatrix::from_fn(k, k, |r, c| {
                if r == c {
                    alpha[r]
                } else if r + 1 == c {
                    beta[r]
                } else if c + 1 == r {
                    beta[c]
                } else {
                    0.0
                }
            });
            let (values, vecs) = sorted_eigen(t);
            let energy = values[0];
            last_residual = (b * vecs[(k - 1, 0)]).abs();
            if last_residual < tol || b < 1e-13 {
                let vectors: Vec<DVector<f64>> = values
                    .iter()
                    .enumerate()
                    .take_while(|(_, &e)| degenerate_with(energy, e))
                    .filter(|(i, _)| (b * vecs[(k - 1, *i)]).abs() < tol.sqrt())
                    .map(|(i, _)| {
                        let mut x = DVector::zeros(dim);
                        for (r, q) in basis.iter().enumerate() {
                            x.axpy(vecs[(r, i)], q, 1.0);
                        }
                        let n = x.norm();
                        x / n
                    })
                    .collect();
                return Ok(GroundSpace {
                    energy,
                    vectors: orthonormalize(vectors),
                });
            }
            if exhausted {
                break;
            }
        }
        beta.push(b);
        v = &w / b;
    }
    Err(Error::NoConvergence {
        iterations: alpha.len(),
        residual: last_residual,
    })
}

fn orthonormalize(vectors: Vec<DVector<f64>>) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        for q in &out {
            let c = q.dot(&v);
            v.axpy(-c, q, 1.0);
        }
        let n = v.norm();
        if n > 1e-8 {
            out.push(v / n);
        }
    }
    out
}

/// Picks one vector from the ground space.
///
/// Inside a degenerate space the eigenvector of `tie_op` with the largest
/// eigenvalue wins. If that is still ambiguous, the projection of the
/// lowest-index basis state with nonzero overlap is taken. The overall sign
/// makes the largest-magnitude amplitude positive.
pub fn select_ground_vector<F>(space: &GroundSpace, tie_op: F) -> DVector<f64>
where
    F: Fn(&DVector<f64>, &mut DVector<f64>),
{
    let chosen = if space.degeneracy() == 1 {
        space.vectors[0].clone()
    } else {
        let d = space.degeneracy();
        let dim = space.vectors[0].len();
        let mut applied = DVector::zeros(dim);
        let mut projected = DMatrix::zeros(d, d);
        for j in 0..d {
            tie_op(&space.vectors[j], &mut applied);
            for i in 0..d {
                projected[(i, j)] = space.vectors[i].dot(&applied);
            }
        }
        let projected = 0.5 * (&projected + projected.transpose());
        let (values, coeffs) = sorted_eigen(projected);
        let top = values[d - 1];
        let top_space: Vec<DVector<f64>> = (0..d)
            .rev()
            .take_while(|&c| (values[c] - top).abs() <= DEGENERACY_TOL * top.abs().max(1.0))
            .map(|c| {
                let mut x = DVector::zeros(dim);
                for (i, v) in space.vectors.iter().enumerate() {
                    x.axpy(coeffs[(i, c)], v, 1.0);
                }
                x
            })
            .collect();
        let top_space = orthonormalize(top_space);
        if top_space.len() == 1 {
            top_space.into_iter().next().unwrap()
        } else {
            canonical_projection(&top_space)
        }
    };
    fix_sign(chosen)
}

fn canonical_projection(space: &[DVector<f64>]) -> DVector<f64> {
    let dim = space[0].len();
    for j in 0..dim {
        let mut p = DVector::zeros(dim);
        for q in space {
            p.axpy(q[j], q, 1.0);
        }
        let n = p.norm();
        if n > 1e-6 {
            return p / n;
        }
    }
    space[0].clone()
}

fn fix_sign(mut v: DVector<f64>) -> DVector<f64> {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(pivot) = v.iter().position(|x| x.abs() >= max - 1e-12) {
        if v[pivot] < 0.0 {
            v.neg_mut();
        }
    }
    v
}
