use crate::linalg::{self, Mat};
use crate::params::{check_feasibility, SrgError, SrgParams};

use super::{check_gamma, Basis, DynamicsError, LaplacianMode, QuantumState, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedBasis {
    Wab,
    Wre3,
}

impl ReducedBasis {
    pub fn state_basis(self) -> Basis {
        match self {
            ReducedBasis::Wab => Basis::ReducedWab,
            ReducedBasis::Wre3 => Basis::ReducedWre3,
        }
    }
}

/// The search Hamiltonian restricted to the 3-dimensional invariant subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedHamiltonian3 {
    pub matrix: Mat<3>,
    pub basis: ReducedBasis,
    pub n: u64,
    pub k: u64,
    pub gamma: f64,
}

impl ReducedHamiltonian3 {
    /// Applies the degree shift `+gamma k` when the full Laplacian is wanted.
    pub fn with_laplacian(mut self, mode: LaplacianMode) -> Self {
        if mode == LaplacianMode::FullLaplacian {
            for i in 0..3 {
                self.matrix[i][i] += self.gamma * self.k as f64;
            }
        }
        self
    }

    /// The same operator written in the (w, a, b) basis.
    pub fn to_wab(&self) -> ReducedHamiltonian3 {
        match self.basis {
            ReducedBasis::Wab => *self,
            ReducedBasis::Wre3 => {
                let t = transform_matrix(self.n, self.k);
                ReducedHamiltonian3 {
                    matrix: linalg::matmul(&linalg::matmul(&t, &self.matrix), &linalg::transpose(&t)),
                    basis: ReducedBasis::Wab,
                    ..*self
                }
            }
        }
    }
}

/// `-gamma [[1/gamma, sqrt k, 0], [sqrt k, lambda, sqrt(mu (k-lambda-1))], [0, sqrt(mu (k-lambda-1)), k - mu]]`
///
/// This is `-gamma A - |w><w|` in the (w, a, b) basis; the b-a coupling comes
/// from the counting identity k(k - lambda - 1) = (N - k - 1) mu.
pub fn reduced_hamiltonian_wab(
    params: &SrgParams,
    gamma: f64,
) -> Result<ReducedHamiltonian3, DynamicsError> {
    check_gamma(gamma)?;
    if !check_feasibility(params)? {
        return Err(SrgError::Infeasible {
            n: params.n,
            k: params.k,
            lambda: params.lambda,
            mu: params.mu,
        }
        .into());
    }
    let k = params.k as f64;
    let lambda = params.lambda as f64;
    let mu = params.mu as f64;
    let ab = mu.sqrt() * (k - lambda - 1.0).sqrt();
    let a = [[1.0 / gamma, k.sqrt(), 0.0], [k.sqrt(), lambda, ab], [0.0, ab, k - mu]];
    Ok(ReducedHamiltonian3 {
        matrix: a.map(|row| row.map(|x| -gamma * x)),
        basis: ReducedBasis::Wab,
        n: params.n,
        k: params.k,
        gamma,
    })
}

/// Complete graph K_n in the (w, a, b) basis. Every other vertex is a
/// neighbor, so the b direction is empty and decoupled.
pub fn reduced_hamiltonian_complete(
    n: u64,
    gamma: f64,
) -> Result<ReducedHamiltonian3, DynamicsError> {
    check_gamma(gamma)?;
    if n < 2 {
        return Err(SrgError::CompleteRange { n }.into());
    }
    let k = (n - 1) as f64;
    let a = [[1.0 / gamma, k.sqrt(), 0.0], [k.sqrt(), k - 1.0, 0.0], [0.0, 0.0, 0.0]];
    Ok(ReducedHamiltonian3 {
        matrix: a.map(|row| row.map(|x| -gamma * x)),
        basis: ReducedBasis::Wab,
        n,
        k: n - 1,
        gamma,
    })
}

/// Columns are |w>, |r>, |e3> written in the (w, a, b) basis.
pub fn transform_matrix(n: u64, k: u64) -> Mat<3> {
    let nm1 = ((n - 1) as f64).sqrt();
    let sk = (k as f64).sqrt() / nm1;
    let sb = ((n - k - 1) as f64).sqrt() / nm1;
    [[1.0, 0.0, 0.0], [0.0, sk, sb], [0.0, sb, -sk]]
}

/// Conjugates a (w, a, b) Hamiltonian into the (w, r, e3) basis, `T^T H T`.
pub fn transform_wre3(h: &ReducedHamiltonian3) -> Result<ReducedHamiltonian3, DynamicsError> {
    if h.basis != ReducedBasis::Wab {
        return Err(DynamicsError::BasisMismatch {
            expected: "wab".into(),
            got: "wre3".into(),
        });
    }
    let t = transform_matrix(h.n, h.k);
    Ok(ReducedHamiltonian3 {
        matrix: linalg::matmul(&linalg::matmul(&linalg::transpose(&t), &h.matrix), &t),
        basis: ReducedBasis::Wre3,
        ..*h
    })
}

/// The uniform superposition |s> in the requested basis, for a k-regular
/// graph on n vertices.
pub fn initial_state(basis: Basis, n: u64, k: u64) -> Result<QuantumState, DynamicsError> {
    let nf = n as f64;
    let re = |x: f64| C64::new(x, 0.0);
    let amps = match basis {
        Basis::FullVertex(dim) => {
            if dim as u64 != n {
                return Err(DynamicsError::BasisMismatch {
                    expected: format!("full({n})"),
                    got: format!("full({dim})"),
                });
            }
            vec![re(1.0 / nf.sqrt()); dim]
        }
        Basis::ReducedWab => vec![
            re(1.0 / nf.sqrt()),
            re((k as f64 / nf).sqrt()),
            re(((n - k - 1) as f64 / nf).sqrt()),
        ],
        Basis::ReducedWre3 => vec![re(1.0 / nf.sqrt()), re(((nf - 1.0) / nf).sqrt()), re(0.0)],
    };
    QuantumState::new(basis, amps)
}
