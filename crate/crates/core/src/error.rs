use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The contrast ratio has a vanishing denominator (θ = 0 or θ = π).
    #[error("contrast undefined at theta = {theta}")]
    UndefinedContrast { theta: f64 },

    /// A quantity diverges at the requested point.
    #[error("divergent: {0}")]
    Divergent(String),

    /// ⟨S^z²⟩ vanishes, so the readout gain has no finite value.
    #[error("readout gain is infinite: <Sz^2> = {sz2}")]
    InfiniteGain { sz2: f64 },

    /// The Fock cutoff leaves more thermal population above it than allowed.
    #[error(
        "cutoff {cutoff} too small for mean occupation {f_bar}: tail mass {tail:e}, use at least {suggested}"
    )]
    Cutoff {
        f_bar: f64,
        cutoff: usize,
        tail: f64,
        suggested: usize,
    },

    /// The requested Hilbert space exceeds the configured size cap.
    #[error("resource limit: {qubits} qubits requested, cap is {max}")]
    Resource { qubits: usize, max: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An iterative eigensolver did not reach its residual target.
    #[error("eigensolver did not converge: residual {residual:e} after {iterations} steps")]
    NoConvergence { iterations: usize, residual: f64 },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
