use crate::exec::{self, Execution};
use crate::graph::Graph;
use crate::linalg::Mat;

use super::{check_gamma, Basis, DynamicsError, QuantumState, C64};

/// Whether the degree term of the Laplacian is kept.
///
/// On a k-regular graph the degree matrix is kI, a constant energy shift, so
/// both modes give the same probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaplacianMode {
    /// `H = -gamma A - |w><w|`
    #[default]
    AdjacencyOnly,
    /// `H = -gamma (A - D) - |w><w|`
    FullLaplacian,
}

/// `H = -gamma L - |w><w|` on a concrete graph.
#[derive(Debug, Clone, Copy)]
pub struct HamiltonianSpec<'g> {
    graph: &'g Graph,
    marked: usize,
    gamma: f64,
    mode: LaplacianMode,
}

/// Below this many adjacency entries a matrix-vector product is not worth
/// spreading over threads.
const PARALLEL_MATVEC_MIN: usize = 1 << 15;
const MATVEC_CHUNK: usize = 128;

impl<'g> HamiltonianSpec<'g> {
    pub fn new(
        graph: &'g Graph,
        marked: usize,
        gamma: f64,
        mode: LaplacianMode,
    ) -> Result<Self, DynamicsError> {
        let n = graph.vertex_count();
        if marked >= n {
            return Err(DynamicsError::MarkedOutOfRange { marked, n });
        }
        check_gamma(gamma)?;
        Ok(HamiltonianSpec {
            graph,
            marked,
            gamma,
            mode,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mode(&self) -> LaplacianMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Gershgorin-style bound on the spectral radius, `2 gamma k_max + 1`.
    pub fn norm_bound(&self) -> f64 {
        2.0 * self.gamma * self.graph.max_degree() as f64 + 1.0
    }

    /// Execution mode worth using for a product of this size.
    pub fn matvec_execution(&self, requested: Execution) -> Execution {
        if self.graph.edge_count() * 2 >= PARALLEL_MATVEC_MIN {
            requested
        } else {
            Execution::Sequential
        }
    }

    /// `out = H psi`, one row at a time over neighbor lists.
    pub fn apply_into(&self, psi: &[C64], out: &mut [C64], exec: Execution) {
        debug_assert_eq!(psi.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        let g = self.graph;
        let gamma = self.gamma;
        let full = self.mode == LaplacianMode::FullLaplacian;
        let w = self.marked;
        exec::fill_indexed(exec, out, MATVEC_CHUNK, |i| {
            let hop: C64 = g.neighbors(i).iter().map(|&j| psi[j as usize]).sum();
            let mut diag = if full { gamma * g.degree(i) as f64 } else { 0.0 };
            if i == w {
                diag -= 1.0;
            }
            psi[i] * diag - hop * gamma
        });
    }

    pub fn apply_vec(&self, psi: &[C64], exec: Execution) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        self.apply_into(psi, &mut out, exec);
        out
    }
}

/// `H psi` for a state in the full vertex basis.
pub fn apply_hamiltonian(
    spec: &HamiltonianSpec<'_>,
    state: &QuantumState,
) -> Result<Vec<C64>, DynamicsError> {
    state.expect_basis(Basis::FullVertex(spec.dim()))?;
    Ok(spec.apply_vec(state.amplitudes(), Execution::default()))
}

/// The marked vertex, its neighbors and its non-neighbors, as three
/// orthonormal vectors of the full space (the last may be empty for a
/// complete graph).
#[derive(Debug, Clone)]
pub struct MarkedSubspace {
    n: usize,
    marked: usize,
    neighbors: Vec<usize>,
    others: Vec<usize>,
}

impl MarkedSubspace {
    pub fn new(graph: &Graph, marked: usize) -> Result<Self, DynamicsError> {
        let n = graph.vertex_count();
        if marked >= n {
            return Err(DynamicsError::MarkedOutOfRange { marked, n });
        }
        let neighbors: Vec<usize> = graph.neighbors(marked).iter().map(|&v| v as usize).collect();
        let others = (0..n)
            .filter(|&v| v != marked && !graph.adjacent(marked, v))
            .collect();
        Ok(MarkedSubspace {
            n,
            marked,
            neighbors,
            others,
        })
    }

    pub fn dim_full(&self) -> usize {
        self.n
    }

    fn groups(&self) -> [&[usize]; 3] {
        [std::slice::from_ref(&self.marked), &self.neighbors, &self.others]
    }

    /// `(<w|psi>, <a|psi>, <b|psi>)`; the last is zero when there are no
    /// non-neighbors.
    pub fn project(&self, psi: &[C64]) -> [C64; 3] {
        self.groups().map(|g| {
            if g.is_empty() {
                return C64::new(0.0, 0.0);
            }
            let s: C64 = g.iter().map(|&i| psi[i]).sum();
            s / (g.len() as f64).sqrt()
        })
    }

    /// Full-space vector with coordinates `c` in the (w, a, b) basis.
    pub fn lift(&self, c: [C64; 3]) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.n];
        for (group, coeff) in self.groups().into_iter().zip(c) {
            if group.is_empty() {
                continue;
            }
            let amp = coeff / (group.len() as f64).sqrt();
            for &i in group {
                v[i] = amp;
            }
        }
        v
    }

    fn basis_vector(&self, j: usize) -> Option<Vec<C64>> {
        if self.groups()[j].is_empty() {
            return None;
        }
        let mut c = [C64::new(0.0, 0.0); 3];
        c[j] = C64::new(1.0, 0.0);
        Some(self.lift(c))
    }

    /// `<u|H|v>` over the three basis vectors (real, since H is real symmetric).
    #[allow(clippy::needless_range_loop)]
    pub fn project_hamiltonian(&self, spec: &HamiltonianSpec<'_>) -> Mat<3> {
        let mut m = [[0.0; 3]; 3];
        for j in 0..3 {
            if let Some(v) = self.basis_vector(j) {
                let hv = spec.apply_vec(&v, Execution::default());
                let c = self.project(&hv);
                for i in 0..3 {
                    m[i][j] = c[i].re;
                }
            }
        }
        m
    }

    /// Norm of the part of `H v` outside the subspace, for each basis vector
    /// `v` in (w, a, b). Zero for an exact strongly regular graph.
    pub fn leakage(&self, spec: &HamiltonianSpec<'_>) -> [f64; 3] {
        std::array::from_fn(|j| match self.basis_vector(j) {
            None => 0.0,
            Some(v) => {
                let hv = spec.apply_vec(&v, Execution::default());
                let inside = self.lift(self.project(&hv));
                hv.iter()
                    .zip(&inside)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_triangular, paley_graph};
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn marked_column_on_pentagon() {
        let g = paley_graph(5).unwrap();
        let spec = HamiltonianSpec::new(&g, 0, 1.0, LaplacianMode::AdjacencyOnly).unwrap();
        let mut psi = vec![c(0.0); 5];
        psi[0] = c(1.0);
        let state = QuantumState::new(Basis::FullVertex(5), psi).unwrap();
        let h = apply_hamiltonian(&spec, &state).unwrap();
        assert_eq!(h, vec![c(-1.0), c(-1.0), c(0.0), c(0.0), c(-1.0)]);
    }

    #[test]
    fn laplacian_mode_adds_degree_shift() {
        let g = paley_graph(13).unwrap();
        let adj = HamiltonianSpec::new(&g, 3, 0.5, LaplacianMode::AdjacencyOnly).unwrap();
        let lap = HamiltonianSpec::new(&g, 3, 0.5, LaplacianMode::FullLaplacian).unwrap();
        let psi: Vec<C64> = (0..13).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let a = adj.apply_vec(&psi, Execution::Sequential);
        let l = lap.apply_vec(&psi, Execution::Sequential);
        for i in 0..13 {
            assert!((l[i] - a[i] - psi[i] * (0.5 * 6.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = paley_graph(5).unwrap();
        assert!(HamiltonianSpec::new(&g, 5, 1.0, LaplacianMode::AdjacencyOnly).is_err());
        assert!(HamiltonianSpec::new(&g, 0, 0.0, LaplacianMode::AdjacencyOnly).is_err());
        assert!(HamiltonianSpec::new(&g, 0, f64::NAN, LaplacianMode::AdjacencyOnly).is_err());
        let spec = HamiltonianSpec::new(&g, 0, 1.0, LaplacianMode::AdjacencyOnly).unwrap();
        let wrong = QuantumState::new(Basis::ReducedWab, vec![c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(matches!(
            apply_hamiltonian(&spec, &wrong),
            Err(DynamicsError::BasisMismatch { .. })
        ));
    }

    #[test]
    fn subspace_is_invariant_on_triangular_graph() {
        let g = build_triangular(7).unwrap();
        let spec = HamiltonianSpec::new(&g, 4, 0.1, LaplacianMode::AdjacencyOnly).unwrap();
        let sub = MarkedSubspace::new(&g, 4).unwrap();
        assert!(sub.leakage(&spec).iter().all(|&r| r <= 1e-12));
    }

    #[test]
    fn subspace_leaks_on_a_non_srg() {
        // 6-cycle is regular but not strongly regular
        let g = crate::graph::Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
            .unwrap();
        let spec = HamiltonianSpec::new(&g, 0, 1.0, LaplacianMode::AdjacencyOnly).unwrap();
        let sub = MarkedSubspace::new(&g, 0).unwrap();
        assert!(sub.leakage(&spec)[2] > 0.1);
    }

    proptest! {
        #[test]
        fn hermitian(seed in prop::collection::vec(-1.0f64..1.0, 52)) {
            let g = paley_graph(13).unwrap();
            let spec = HamiltonianSpec::new(&g, 7, 0.3, LaplacianMode::FullLaplacian).unwrap();
            let phi: Vec<C64> = seed[..26].chunks(2).map(|p| C64::new(p[0], p[1])).collect();
            let psi: Vec<C64> = seed[26..].chunks(2).map(|p| C64::new(p[0], p[1])).collect();
            let hpsi = spec.apply_vec(&psi, Execution::Sequential);
            let hphi = spec.apply_vec(&phi, Execution::Sequential);
            let lhs: C64 = phi.iter().zip(&hpsi).map(|(a, b)| a.conj() * b).sum();
            let rhs: C64 = psi.iter().zip(&hphi).map(|(a, b)| a.conj() * b).sum();
            prop_assert!((lhs - rhs.conj()).norm() < 1e-12);
        }
    }
}
