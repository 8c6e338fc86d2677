//! Single runs and coupling scans driven by a [`RunConfig`].

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use crate::dynamics::{
    evolve_full, evolve_reduced, find_peak, initial_state, reduced_hamiltonian_complete,
    reduced_hamiltonian_wab, uniform_times, Basis, EvolutionTrace, HamiltonianSpec, LaplacianMode,
    Peak, ReducedHamiltonian3, Rk4Settings,
};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::{build_family, Graph};
use crate::numfmt;
use crate::params::{GraphFamily, SrgParams};
use crate::theory::{critical_gamma, CaseTag};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaPolicy {
    /// `1/k` (`1/N` on the complete graph).
    C1,
    /// `1/k + 1/((N-1) mu)` (`1/N` on the complete graph).
    C2,
    Value(f64),
}

impl fmt::Display for GammaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaPolicy::C1 => f.write_str("c1"),
            GammaPolicy::C2 => f.write_str("c2"),
            GammaPolicy::Value(g) => write!(f, "{g}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Full,
    Reduced,
    Both,
}

pub const MIN_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: GraphFamily,
    pub gamma: GammaPolicy,
    pub marked: usize,
    /// Defaults to `pi sqrt(N)`, twice the predicted runtime.
    pub t_max: Option<f64>,
    /// Number of intervals; the trace has `samples + 1` points.
    pub samples: usize,
    pub engine: Engine,
    pub laplacian: LaplacianMode,
    pub rk4: Rk4Settings,
}

impl RunConfig {
    pub fn new(family: GraphFamily) -> Self {
        RunConfig {
            family,
            gamma: GammaPolicy::C2,
            marked: 0,
            t_max: None,
            samples: 1000,
            engine: Engine::Full,
            laplacian: LaplacianMode::AdjacencyOnly,
            rk4: Rk4Settings::default(),
        }
    }

    pub fn with_gamma(mut self, gamma: GammaPolicy) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = Some(t_max);
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn horizon(&self) -> f64 {
        self.t_max
            .unwrap_or_else(|| PI * (self.family.vertex_count() as f64).sqrt())
    }

    pub fn resolve_gamma(&self) -> Result<f64> {
        let params = self.family.params()?;
        let gamma = match (self.gamma, params) {
            (GammaPolicy::Value(g), _) => g,
            (_, None) => 1.0 / self.family.vertex_count() as f64,
            (GammaPolicy::C1, Some(p)) => critical_gamma(&p, CaseTag::Case1)?,
            (GammaPolicy::C2, Some(p)) => critical_gamma(&p, CaseTag::Case2)?,
        };
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Config(format!("gamma must be positive, got {gamma}")));
        }
        Ok(gamma)
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if self.samples < MIN_SAMPLES {
            return Err(Error::Config(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                self.samples
            )));
        }
        let t = self.horizon();
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Config(format!("t_max must be positive, got {t}")));
        }
        let n = self.family.vertex_count();
        if self.marked as u64 >= n {
            return Err(Error::Config(format!(
                "marked vertex {} out of range for {n} vertices",
                self.marked
            )));
        }
        self.resolve_gamma()?;
        Ok(())
    }
}

/// Result of one simulation.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub gamma: f64,
    /// The full-engine trace when it ran, else the reduced one.
    pub trace: EvolutionTrace,
    /// Reduced-engine trace when both engines ran.
    pub reference: Option<EvolutionTrace>,
    pub peak: Peak,
    /// Largest pointwise full-vs-reduced difference when both engines ran.
    pub max_deviation: Option<f64>,
}

/// Family data shared by every run of a scan.
struct Prepared {
    params: Option<SrgParams>,
    graph: Option<Graph>,
}

fn prepare(config: &RunConfig) -> Result<Prepared> {
    config.validate()?;
    let params = config.family.params()?;
    let graph = match config.engine {
        Engine::Reduced => None,
        Engine::Full | Engine::Both => Some(build_family(&config.family)?),
    };
    Ok(Prepared { params, graph })
}

fn reduced_hamiltonian(config: &RunConfig, params: Option<SrgParams>, gamma: f64) -> Result<ReducedHamiltonian3> {
    let h = match params {
        Some(p) => reduced_hamiltonian_wab(&p, gamma)?,
        None => reduced_hamiltonian_complete(config.family.vertex_count(), gamma)?,
    };
    Ok(h.with_laplacian(config.laplacian))
}

fn run_prepared(config: &RunConfig, prep: &Prepared, gamma: f64) -> Result<RunOutput> {
    let times = uniform_times(config.horizon(), config.samples)?;
    let n = config.family.vertex_count();
    let k = config.family.degree();
    let label = config.family.to_string();

    let mut full = None;
    if let Some(g) = &prep.graph {
        let spec = HamiltonianSpec::new(g, config.marked, gamma, config.laplacian)?;
        let psi0 = initial_state(Basis::FullVertex(n as usize), n, k)?;
        let mut tr = evolve_full(&spec, &psi0, &times, config.rk4)?;
        tr.meta.family = Some(label.clone());
        tr.meta.params = prep.params;
        full = Some(tr);
    }
    let mut reduced = None;
    if config.engine != Engine::Full {
        let h = reduced_hamiltonian(config, prep.params, gamma)?;
        let psi0 = initial_state(Basis::ReducedWab, n, k)?;
        let mut tr = evolve_reduced(&h, &psi0, &times)?;
        tr.meta.family = Some(label);
        tr.meta.params = prep.params;
        tr.meta.laplacian = config.laplacian;
        reduced = Some(tr);
    }
    let (trace, reference) = match (full, reduced) {
        (Some(f), r) => (f, r),
        (None, Some(r)) => (r, None),
        (None, None) => unreachable!("at least one engine runs"),
    };
    let max_deviation = reference.as_ref().map(|r| trace.max_deviation(r));
    let peak = find_peak(&trace)?;
    Ok(RunOutput {
        gamma,
        trace,
        reference,
        peak,
        max_deviation,
    })
}

pub fn run_simulation(config: &RunConfig) -> Result<RunOutput> {
    let prep = prepare(config)?;
    let gamma = config.resolve_gamma()?;
    run_prepared(config, &prep, gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `steps` couplings from `min` to `max` inclusive.
pub fn gamma_grid(min: f64, max: f64, steps: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && min > 0.0 && min < max) {
        return Err(Error::Config(format!(
            "need 0 < gamma_min < gamma_max, got {min} and {max}"
        )));
    }
    if steps < 3 {
        return Err(Error::Config(format!("need at least 3 steps, got {steps}")));
    }
    let last = (steps - 1) as f64;
    let mut grid: Vec<f64> = (0..steps)
        .map(|i| {
            let s = i as f64 / last;
            match spacing {
                Spacing::Linear => min + (max - min) * s,
                Spacing::Log => (min.ln() + (max.ln() - min.ln()) * s).exp(),
            }
        })
        .collect();
    grid[0] = min;
    grid[steps - 1] = max;
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub gamma: f64,
    pub t_peak: f64,
    pub p_peak: f64,
}

/// One simulation per coupling in `gammas` (the gamma policy of `config` is
/// ignored). Runs are independent and may execute in parallel; rows come back
/// sorted by gamma.
pub fn scan_gamma(config: &RunConfig, gammas: &[f64], exec: Execution) -> Result<Vec<ScanRow>> {
    let prep = prepare(config)?;
    let mut sorted = gammas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rows = exec::map_slice(exec, &sorted, |&g| {
        let out = run_prepared(config, &prep, g)?;
        Ok(ScanRow {
            gamma: g,
            t_peak: out.peak.t,
            p_peak: out.peak.p,
        })
    });
    rows.into_iter().collect()
}

pub fn write_scan_csv<W: Write>(mut w: W, config: &RunConfig, rows: &[ScanRow]) -> io::Result<()> {
    writeln!(w, "# family={}", config.family)?;
    let engine = match config.engine {
        Engine::Full => "full",
        Engine::Reduced => "reduced",
        Engine::Both => "both",
    };
    writeln!(w, "# engine={engine}")?;
    writeln!(w, "# t_max={}", numfmt::float(config.horizon()))?;
    writeln!(w, "# samples={}", config.samples)?;
    writeln!(w, "gamma,t_peak,p_peak")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{}",
            numfmt::float(r.gamma),
            numfmt::float(r.t_peak),
            numfmt::float(r.p_peak)
        )?;
    }
    w.flush()
}
