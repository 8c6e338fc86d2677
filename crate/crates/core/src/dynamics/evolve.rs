use crate::exec::Execution;
use crate::linalg::{self, symmetric_eigen};

use super::{
    hamiltonian::MarkedSubspace, norm, Basis, DynamicsError, EngineKind, EvolutionTrace,
    HamiltonianSpec, LaplacianMode, QuantumState, ReducedBasis, ReducedHamiltonian3, TraceMeta,
    C64,
};

/// Norm drift beyond this aborts a run.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;
/// Upper limit on `h * (2 gamma k + 1)`.
pub const MAX_STEP_FACTOR: f64 = 0.1;

/// Fixed-step RK4 settings for the full engine.
///
/// The internal step `h` never exceeds `step_factor / (2 gamma k + 1)`, and is
/// shrunk further so that every sample time is hit exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rk4Settings {
    pub step_factor: f64,
    pub execution: Execution,
}

impl Default for Rk4Settings {
    fn default() -> Self {
        Rk4Settings {
            step_factor: 0.025,
            execution: Execution::default(),
        }
    }
}

impl Rk4Settings {
    pub fn halved(self) -> Self {
        Rk4Settings {
            step_factor: self.step_factor / 2.0,
            ..self
        }
    }
}

/// `samples + 1` equally spaced times from 0 to `t_max` inclusive.
pub fn uniform_times(t_max: f64, samples: usize) -> Result<Vec<f64>, DynamicsError> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(DynamicsError::BadHorizon(t_max));
    }
    if samples == 0 {
        return Err(DynamicsError::BadTimes);
    }
    Ok((0..=samples)
        .map(|i| t_max * i as f64 / samples as f64)
        .collect())
}

fn check_times(times: &[f64]) -> Result<(), DynamicsError> {
    let ok = times.iter().all(|t| t.is_finite() && *t >= 0.0)
        && times.windows(2).all(|w| w[0] <= w[1]);
    if ok {
        Ok(())
    } else {
        Err(DynamicsError::BadTimes)
    }
}

fn probabilities(c: [C64; 3]) -> [f64; 3] {
    c.map(|z| z.norm_sqr())
}

/// Integrates `i dpsi/dt = H psi` in the full vertex space with classic RK4.
///
/// The state is propagated in a frame rotating at the reference energy
/// `E0 = <psi0|H|psi0>`, i.e. with `H - E0` in place of `H`. That only changes
/// the global phase, which no probability sees, but keeps the populated part of
/// the spectrum close to zero where RK4 phase errors are smallest. The norm is
/// monitored at every sample and never renormalized.
pub fn evolve_full(
    spec: &HamiltonianSpec<'_>,
    psi0: &QuantumState,
    times: &[f64],
    settings: Rk4Settings,
) -> Result<EvolutionTrace, DynamicsError> {
    let n = spec.dim();
    psi0.expect_basis(Basis::FullVertex(n))?;
    check_times(times)?;
    let factor = settings.step_factor;
    if !(factor.is_finite() && factor > 0.0 && factor <= MAX_STEP_FACTOR) {
        return Err(DynamicsError::BadStepFactor(factor));
    }
    let exec = spec.matvec_execution(settings.execution);
    let h_max = factor / spec.norm_bound();
    let subspace = MarkedSubspace::new(spec.graph(), spec.marked())?;

    let mut y = psi0.amplitudes().to_vec();
    let hy = spec.apply_vec(&y, exec);
    let e_ref: f64 = y.iter().zip(&hy).map(|(a, b)| (a.conj() * b).re).sum();

    let zero = C64::new(0.0, 0.0);
    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut tmp = vec![zero; n];
    // out = -i (H - E0) x
    let deriv = |x: &[C64], out: &mut [C64]| {
        spec.apply_into(x, out, exec);
        for (o, xi) in out.iter_mut().zip(x) {
            let v = *o - xi * e_ref;
            *o = C64::new(v.im, -v.re);
        }
    };

    let meta = TraceMeta {
        engine: EngineKind::Full,
        gamma: spec.gamma(),
        n: n as u64,
        k: spec.graph().max_degree() as u64,
        family: None,
        params: None,
        marked: Some(spec.marked()),
        laplacian: spec.mode(),
        step: Some(h_max),
        step_factor: Some(factor),
        max_norm_drift: 0.0,
    };
    let mut trace = EvolutionTrace::with_capacity(times.len(), meta);
    let mut t_now = 0.0;
    let mut max_drift = 0.0f64;
    for &t_next in times {
        let span = t_next - t_now;
        if span > 0.0 {
            let steps = (span / h_max).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                deriv(&y, &mut k1);
                for i in 0..n {
                    tmp[i] = y[i] + k1[i] * (0.5 * h);
                }
                deriv(&tmp, &mut k2);
                for i in 0..n {
                    tmp[i] = y[i] + k2[i] * (0.5 * h);
                }
                deriv(&tmp, &mut k3);
                for i in 0..n {
                    tmp[i] = y[i] + k3[i] * h;
                }
                deriv(&tmp, &mut k4);
                for i in 0..n {
                    y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
                }
            }
            t_now = t_next;
        }
        let drift = (norm(&y) - 1.0).abs();
        max_drift = max_drift.max(drift);
        if drift > NORM_DRIFT_LIMIT {
            return Err(DynamicsError::NormDrift { t: t_next, drift });
        }
        trace.push(t_next, probabilities(subspace.project(&y)));
    }
    trace.meta.max_norm_drift = max_drift;
    Ok(trace)
}

/// Exact evolution in the reduced space:
/// `psi(t) = sum_j exp(-i E_j t) <v_j|psi0> |v_j>` from a Jacobi eigendecomposition.
/// Probabilities are always reported in the (w, a, b) basis.
pub fn evolve_reduced(
    h: &ReducedHamiltonian3,
    psi0: &QuantumState,
    times: &[f64],
) -> Result<EvolutionTrace, DynamicsError> {
    psi0.expect_basis(h.basis.state_basis())?;
    check_times(times)?;
    let eig = symmetric_eigen(&h.matrix);
    let v = eig.vectors;
    let amps = psi0.amplitudes();
    let coeffs: [C64; 3] = std::array::from_fn(|j| (0..3).map(|i| amps[i] * v[i][j]).sum());
    let to_wab = match h.basis {
        ReducedBasis::Wab => linalg::identity(),
        ReducedBasis::Wre3 => super::transform_matrix(h.n, h.k),
    };

    let meta = TraceMeta {
        engine: EngineKind::Reduced,
        gamma: h.gamma,
        n: h.n,
        k: h.k,
        family: None,
        params: None,
        marked: None,
        laplacian: LaplacianMode::AdjacencyOnly,
        step: None,
        step_factor: None,
        max_norm_drift: 0.0,
    };
    let mut trace = EvolutionTrace::with_capacity(times.len(), meta);
    let mut max_drift = 0.0f64;
    for &t in times {
        let phased: [C64; 3] =
            std::array::from_fn(|j| coeffs[j] * C64::from_polar(1.0, -eig.values[j] * t));
        let psi: [C64; 3] = std::array::from_fn(|i| (0..3).map(|j| phased[j] * v[i][j]).sum());
        let wab: [C64; 3] = std::array::from_fn(|i| (0..3).map(|j| psi[j] * to_wab[i][j]).sum());
        let drift = (norm(&wab) - 1.0).abs();
        max_drift = max_drift.max(drift);
        if drift > NORM_DRIFT_LIMIT {
            return Err(DynamicsError::NormDrift { t, drift });
        }
        trace.push(t, probabilities(wab));
    }
    trace.meta.max_norm_drift = max_drift;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{
        initial_state, reduced_hamiltonian_complete, reduced_hamiltonian_wab, transform_wre3,
    };
    use crate::graph::{build_complete, paley_graph};
    use crate::params::SrgParams;
    use std::f64::consts::PI;

    #[test]
    fn uniform_grid() {
        let t = uniform_times(10.0, 1000).unwrap();
        assert_eq!(t.len(), 1001);
        assert_eq!(t[1000], 10.0);
        assert!(uniform_times(0.0, 10).is_err());
        assert!(uniform_times(f64::INFINITY, 10).is_err());
        assert!(uniform_times(1.0, 0).is_err());
    }

    #[test]
    fn complete_graph_starts_at_one_over_n() {
        for n in [4usize, 10, 33] {
            let g = build_complete(n).unwrap();
            let spec =
                HamiltonianSpec::new(&g, 0, 1.0 / n as f64, LaplacianMode::AdjacencyOnly).unwrap();
            let psi0 = initial_state(Basis::FullVertex(n), n as u64, n as u64 - 1).unwrap();
            let tr = evolve_full(&spec, &psi0, &[0.0], Rk4Settings::default()).unwrap();
            assert!((tr.p_w[0] - 1.0 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn complete_graph_reaches_marked_vertex() {
        let n = 64;
        let g = build_complete(n).unwrap();
        let spec = HamiltonianSpec::new(&g, 0, 1.0 / 64.0, LaplacianMode::AdjacencyOnly).unwrap();
        let psi0 = initial_state(Basis::FullVertex(n), 64, 63).unwrap();
        let t_star = PI * 8.0 / 2.0;
        let tr = evolve_full(&spec, &psi0, &[t_star], Rk4Settings::default()).unwrap();
        assert!(tr.p_w[0] > 1.0 - 2.0 / 8.0, "{}", tr.p_w[0]);

        let h = reduced_hamiltonian_complete(64, 1.0 / 64.0).unwrap();
        let s = initial_state(Basis::ReducedWab, 64, 63).unwrap();
        let red = evolve_reduced(&h, &s, &[t_star]).unwrap();
        assert!((red.p_w[0] - tr.p_w[0]).abs() < 1e-8);
        assert_eq!(red.p_b[0], 0.0);
    }

    #[test]
    fn full_and_reduced_agree_on_paley13() {
        let g = paley_graph(13).unwrap();
        let p = SrgParams::new(13, 6, 2, 3);
        let gamma = 1.0 / 6.0 + 1.0 / (12.0 * 3.0);
        let times = uniform_times(20.0, 200).unwrap();
        let spec = HamiltonianSpec::new(&g, 0, gamma, LaplacianMode::AdjacencyOnly).unwrap();
        let full = evolve_full(
            &spec,
            &initial_state(Basis::FullVertex(13), 13, 6).unwrap(),
            &times,
            Rk4Settings::default(),
        )
        .unwrap();
        let h = reduced_hamiltonian_wab(&p, gamma).unwrap();
        let red = evolve_reduced(&h, &initial_state(Basis::ReducedWab, 13, 6).unwrap(), &times).unwrap();
        assert!(full.max_deviation(&red) < 1e-6, "{}", full.max_deviation(&red));
        assert!(full.max_leakage() < 1e-6);
        assert!(red.meta.max_norm_drift < 1e-12);
        assert!(full.meta.max_norm_drift < 1e-6);

        let h3 = transform_wre3(&h).unwrap();
        let red3 =
            evolve_reduced(&h3, &initial_state(Basis::ReducedWre3, 13, 6).unwrap(), &times).unwrap();
        assert!(red3.max_deviation(&red) < 1e-10);
    }

    #[test]
    fn laplacian_mode_does_not_change_probabilities() {
        let g = paley_graph(13).unwrap();
        let times = uniform_times(15.0, 150).unwrap();
        let psi0 = initial_state(Basis::FullVertex(13), 13, 6).unwrap();
        let run = |mode| {
            let spec = HamiltonianSpec::new(&g, 5, 0.2, mode).unwrap();
            evolve_full(&spec, &psi0, &times, Rk4Settings::default()).unwrap()
        };
        let a = run(LaplacianMode::AdjacencyOnly);
        let b = run(LaplacianMode::FullLaplacian);
        assert!(a.max_deviation(&b) < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = paley_graph(5).unwrap();
        let spec = HamiltonianSpec::new(&g, 0, 0.5, LaplacianMode::AdjacencyOnly).unwrap();
        let psi0 = initial_state(Basis::FullVertex(5), 5, 2).unwrap();
        let s = Rk4Settings::default();
        assert_eq!(evolve_full(&spec, &psi0, &[1.0, 0.5], s), Err(DynamicsError::BadTimes));
        assert_eq!(evolve_full(&spec, &psi0, &[-1.0], s), Err(DynamicsError::BadTimes));
        let too_big = Rk4Settings { step_factor: 0.2, ..s };
        assert!(matches!(
            evolve_full(&spec, &psi0, &[1.0], too_big),
            Err(DynamicsError::BadStepFactor(_))
        ));
        let wab = initial_state(Basis::ReducedWab, 5, 2).unwrap();
        assert!(matches!(
            evolve_full(&spec, &wab, &[1.0], s),
            Err(DynamicsError::BasisMismatch { .. })
        ));
        let h = reduced_hamiltonian_wab(&SrgParams::new(5, 2, 0, 1), 0.5).unwrap();
        assert!(matches!(
            evolve_reduced(&h, &psi0, &[1.0]),
            Err(DynamicsError::BasisMismatch { .. })
        ));
    }

    #[test]
    fn norm_drift_is_recorded() {
        let g = paley_graph(5).unwrap();
        let spec = HamiltonianSpec::new(&g, 0, 50.0, LaplacianMode::AdjacencyOnly).unwrap();
        let psi0 = initial_state(Basis::FullVertex(5), 5, 2).unwrap();
        let s = Rk4Settings { step_factor: 0.1, ..Default::default() };
        let tr = evolve_full(&spec, &psi0, &[1000.0, 2000.0], s).unwrap();
        let d = tr.meta.max_norm_drift;
        assert!(d > 0.0 && d < NORM_DRIFT_LIMIT, "{d}");
    }
}
