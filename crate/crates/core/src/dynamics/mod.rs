//! Search Hamiltonian, Schrödinger evolution and probability traces.
//!
//! Two engines are provided. The full engine integrates the N-dimensional
//! problem with fixed-step RK4 over neighbor lists; the reduced engine evolves
//! the exact 3-dimensional invariant subspace spanned by the marked vertex,
//! its neighbors and its non-neighbors by diagonalizing a 3x3 matrix. Each
//! serves as an oracle for the other.

mod evolve;
mod hamiltonian;
mod reduced;
mod trace;

pub use evolve::{evolve_full, evolve_reduced, uniform_times, Rk4Settings};
pub use hamiltonian::{apply_hamiltonian, HamiltonianSpec, LaplacianMode, MarkedSubspace};
pub use reduced::{
    initial_state, reduced_hamiltonian_complete, reduced_hamiltonian_wab, transform_matrix,
    transform_wre3, ReducedBasis, ReducedHamiltonian3,
};
pub use trace::{find_peak, EngineKind, EvolutionTrace, Peak, TraceMeta};

use num_complex::Complex64;
use thiserror::Error;

use crate::params::SrgError;

pub type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("marked vertex {marked} out of range for {n} vertices")]
    MarkedOutOfRange { marked: usize, n: usize },
    #[error("coupling gamma must be finite and positive, got {0}")]
    BadGamma(f64),
    #[error("basis mismatch: expected {expected}, got {got}")]
    BasisMismatch { expected: String, got: String },
    #[error("state is not normalized: |psi| = {0}")]
    NotNormalized(f64),
    #[error(transparent)]
    Params(#[from] SrgError),
    #[error("sample times must be finite, non-negative and non-decreasing")]
    BadTimes,
    #[error("t_max must be positive and finite, got {0}")]
    BadHorizon(f64),
    #[error("RK4 step factor must be positive and at most 0.1, got {0}")]
    BadStepFactor(f64),
    #[error("integrator accuracy lost: norm drift {drift:e} at t = {t}")]
    NormDrift { t: f64, drift: f64 },
    #[error("trace has {0} samples; at least 3 are needed")]
    TraceTooShort(usize),
}

/// Which vector space a [`QuantumState`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// One amplitude per vertex.
    FullVertex(usize),
    /// Marked vertex, uniform over its neighbors, uniform over the rest.
    ReducedWab,
    /// Marked vertex, uniform over all other vertices, and the orthogonal
    /// complement of those two inside the reduced space.
    ReducedWre3,
}

impl Basis {
    pub fn dim(&self) -> usize {
        match *self {
            Basis::FullVertex(n) => n,
            Basis::ReducedWab | Basis::ReducedWre3 => 3,
        }
    }

    fn name(&self) -> String {
        match self {
            Basis::FullVertex(n) => format!("full({n})"),
            Basis::ReducedWab => "wab".into(),
            Basis::ReducedWre3 => "wre3".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    basis: Basis,
    amps: Vec<C64>,
}

impl QuantumState {
    /// Wraps amplitudes, requiring unit norm to within 1e-9.
    pub fn new(basis: Basis, amps: Vec<C64>) -> Result<Self, DynamicsError> {
        if amps.len() != basis.dim() {
            return Err(DynamicsError::BasisMismatch {
                expected: basis.name(),
                got: format!("vector of length {}", amps.len()),
            });
        }
        let s = QuantumState { basis, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(DynamicsError::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub(crate) fn expect_basis(&self, expected: Basis) -> Result<(), DynamicsError> {
        if self.basis == expected {
            Ok(())
        } else {
            Err(DynamicsError::BasisMismatch {
                expected: expected.name(),
                got: self.basis.name(),
            })
        }
    }
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn check_gamma(gamma: f64) -> Result<(), DynamicsError> {
    if gamma.is_finite() && gamma > 0.0 {
        Ok(())
    } else {
        Err(DynamicsError::BadGamma(gamma))
    }
}
