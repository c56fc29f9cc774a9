//! Shared benchmark fixtures.

use qdet_core::oracle::auto_cutoff;

/// Verify-grid corner used by the oracle benches: (n, θ, η, N, f̄).
pub const ORACLE_POINT: (u32, f64, f64, usize, f64) = (1, 0.7, 0.8, 2, 1.0);

/// Cutoff the automatic rule picks for [`ORACLE_POINT`].
pub fn oracle_cutoff() -> usize {
    let (n, _, _, _, f_bar) = ORACLE_POINT;
    auto_cutoff(f_bar, n)
}

/// Small transverse field where the ground state is strongly correlated.
pub const SMALL_LAMBDA: f64 = 0.02;
