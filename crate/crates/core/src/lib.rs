//! Analytically solvable model of a qubit-array single-microwave-photon
//! detector.
//!
//! - [`model`]: parameters, thermal occupations, qubit decay.
//! - [`analytic`]: closed-form phase averages, SNR and contrast.
//! - [`squeezing`]: readout gain of correlated (spin-squeezed) qubit states.
//! - [`oracle`]: truncated Fock-space simulation checking the closed forms.

// `!(x >= 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod model;
pub mod oracle;
pub mod squeezing;

pub use error::{Error, Result};
pub use model::{DetectorParams, NoiseSpec, QubitDensityMatrix};
pub use analytic::PhaseExpectation;
pub use squeezing::{DickeState, RegisterState, SpinObservables};
