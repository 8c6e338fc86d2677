//! Perturbative predictions for search on strongly regular graphs.
//!
//! At the critical coupling the leading-order Hamiltonian has a degenerate
//! pair of eigenstates, one of which is close to the uniform superposition.
//! The first-order coupling splits them, and the splitting sets the time scale
//! and the height of the success-probability oscillation. Everything here is a
//! closed form in (N, k, lambda, mu) plus one or two 2x2 eigenproblems.

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::Serialize;

use crate::dynamics::{reduced_hamiltonian_wab, transform_wre3, DynamicsError};
use crate::linalg::{self, symmetric_eigen, Mat};
use crate::numfmt::{self, Num};
use crate::params::{check_feasibility, SrgError, SrgParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// k grows like N.
    Case1,
    /// k grows slower than N.
    Case2,
}

impl CaseTag {
    pub fn number(self) -> u8 {
        match self {
            CaseTag::Case1 => 1,
            CaseTag::Case2 => 2,
        }
    }
}

fn ensure_feasible(p: &SrgParams) -> Result<(), SrgError> {
    if check_feasibility(p)? {
        Ok(())
    } else {
        Err(SrgError::Infeasible {
            n: p.n,
            k: p.k,
            lambda: p.lambda,
            mu: p.mu,
        })
    }
}

/// `1/k` for Case 1, `1/k + 1/((N-1) mu)` for Case 2.
pub fn critical_gamma(params: &SrgParams, case: CaseTag) -> Result<f64, SrgError> {
    ensure_feasible(params)?;
    let k = params.k as f64;
    Ok(match case {
        CaseTag::Case1 => 1.0 / k,
        CaseTag::Case2 => 1.0 / k + 1.0 / ((params.n - 1) as f64 * params.mu as f64),
    })
}

/// The second degenerate eigenvector of the Case-2 leading-order Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case2Vector {
    /// `k - lambda + mu`, exact.
    pub k_lm: i64,
    /// Whether `k - lambda + mu = (N-k-1) mu / k + mu + 1` holds in integers.
    pub identity_holds: bool,
    /// `(1 + k_lm^2 / k)^(-1/2)`
    pub c_exact: f64,
    /// `k^(3/2) / (mu N)`
    pub c_approx: f64,
    /// Components in the (w, r, e3) basis.
    pub components: [f64; 3],
}

pub fn case2_vector_c(params: &SrgParams) -> Result<Case2Vector, SrgError> {
    ensure_feasible(params)?;
    let (n, k, l, m) = (
        params.n as i64,
        params.k as i64,
        params.lambda as i64,
        params.mu as i64,
    );
    let k_lm = k - l + m;
    let num = (n - k - 1) * m;
    let identity_holds = num % k == 0 && k_lm == num / k + m + 1;
    let kf = k as f64;
    let c_exact = (1.0 + (k_lm * k_lm) as f64 / kf).powf(-0.5);
    let c_approx = kf.powf(1.5) / (m as f64 * n as f64);
    Ok(Case2Vector {
        k_lm,
        identity_holds,
        c_exact,
        c_approx,
        components: [c_exact * k_lm as f64 / kf.sqrt(), 0.0, c_exact],
    })
}

/// `H0` of the Case-2 split in the (w, r, e3) basis:
/// `-gamma [[1/gamma, 0, sqrt k], [0, k, 0], [sqrt k, 0, lambda - mu]]`.
pub fn case2_leading_order(params: &SrgParams, gamma: f64) -> Mat<3> {
    let k = params.k as f64;
    let lm = params.lambda as f64 - params.mu as f64;
    [[1.0 / gamma, 0.0, k.sqrt()], [0.0, k, 0.0], [k.sqrt(), 0.0, lm]]
        .map(|row| row.map(|x| -gamma * x))
}

/// Everything the perturbative analysis predicts for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionReport {
    pub params: SrgParams,
    pub case: CaseTag,
    pub gamma_c1: f64,
    pub gamma_c2: f64,
    /// The coupling belonging to `case`.
    pub gamma: f64,
    pub c_exact: f64,
    pub c_approx: f64,
    pub k_lm: i64,
    /// Amplitude prefactor `C mu N / k^(3/2)` (1 for Case 1).
    pub amplitude: f64,
    /// Sine frequency of the predicted curve.
    pub frequency: f64,
    /// `pi / 2` over the sine frequency.
    pub t_star: f64,
    /// `pi sqrt(N) / 2`
    pub t_star_asymptotic: f64,
    /// Splitting of the two perturbed eigenvalues.
    pub energy_gap: f64,
    pub predicted_peak_probability: f64,
}

impl PredictionReport {
    /// `amplitude^2 sin^2(frequency t)`
    pub fn predicted_probability(&self, t: f64) -> f64 {
        (self.amplitude * (self.frequency * t).sin()).powi(2)
    }

    fn entries(&self) -> Vec<(&'static str, Value)> {
        use Value::{Int, Real, Text};
        let p = &self.params;
        vec![
            ("case", Int(self.case.number() as i64)),
            ("n", Int(p.n as i64)),
            ("k", Int(p.k as i64)),
            ("lambda", Int(p.lambda as i64)),
            ("mu", Int(p.mu as i64)),
            ("params", Text(format!("{} {} {} {}", p.n, p.k, p.lambda, p.mu))),
            ("gamma_c1", Real(self.gamma_c1)),
            ("gamma_c2", Real(self.gamma_c2)),
            ("gamma", Real(self.gamma)),
            ("k_lm", Int(self.k_lm)),
            ("C_exact", Real(self.c_exact)),
            ("C_approx", Real(self.c_approx)),
            ("amplitude", Real(self.amplitude)),
            ("frequency", Real(self.frequency)),
            ("energy_gap", Real(self.energy_gap)),
            ("t_star", Real(self.t_star)),
            ("t_star_asymptotic", Real(self.t_star_asymptotic)),
            ("predicted_peak_probability", Real(self.predicted_peak_probability)),
        ]
    }

    /// One flat JSON object; key order as in the struct.
    pub fn write_json<W: Write>(&self, w: W) -> io::Result<()> {
        write_record_json(w, &self.entries())
    }

    /// `key,value` lines.
    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        write_record_csv(w, &self.entries())
    }
}

#[derive(Debug, Clone)]
enum Value {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Int(i) => s.serialize_i64(*i),
            Value::Real(x) => Num(*x).serialize(s),
            Value::Text(t) => s.serialize_str(t),
        }
    }
}

fn write_record_json<W: Write>(mut w: W, entries: &[(&'static str, Value)]) -> io::Result<()> {
    use serde::ser::SerializeMap;
    struct Record<'a>(&'a [(&'static str, Value)]);
    impl Serialize for Record<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let mut map = s.serialize_map(Some(self.0.len()))?;
            for (k, v) in self.0 {
                map.serialize_entry(k, v)?;
            }
            map.end()
        }
    }
    serde_json::to_writer_pretty(&mut w, &Record(entries))?;
    writeln!(w)?;
    w.flush()
}

fn write_record_csv<W: Write>(mut w: W, entries: &[(&'static str, Value)]) -> io::Result<()> {
    writeln!(w, "key,value")?;
    for (k, v) in entries {
        let text = match v {
            Value::Int(i) => i.to_string(),
            Value::Real(x) => numfmt::float(*x),
            Value::Text(t) => t.clone(),
        };
        writeln!(w, "{k},{text}")?;
    }
    w.flush()
}

fn gap_2x2(m: [[f64; 2]; 2]) -> f64 {
    let e = symmetric_eigen(&m);
    e.values[1] - e.values[0]
}

pub fn predict(params: &SrgParams, case: CaseTag) -> Result<PredictionReport, DynamicsError> {
    let gamma_c1 = critical_gamma(params, CaseTag::Case1)?;
    let gamma_c2 = critical_gamma(params, CaseTag::Case2)?;
    let c = case2_vector_c(params)?;
    let (n, k, mu) = (params.n as f64, params.k as f64, params.mu as f64);
    let t_star_asymptotic = PI * n.sqrt() / 2.0;
    let (gamma, amplitude, frequency, energy_gap) = match case {
        CaseTag::Case1 => {
            // (w, r) block of the exact reduced Hamiltonian in the (w, r, e3) basis
            let h = transform_wre3(&reduced_hamiltonian_wab(params, gamma_c1)?)?.matrix;
            let gap = gap_2x2([[h[0][0], h[0][1]], [h[1][0], h[1][1]]]);
            (gamma_c1, 1.0, 1.0 / n.sqrt(), gap)
        }
        CaseTag::Case2 => {
            let scale = c.c_exact * mu / k.powf(1.5);
            let gap = 2.0 * gamma_c2 * c.c_exact * mu * (n / k).sqrt();
            (gamma_c2, scale * n, scale * n.sqrt(), gap)
        }
    };
    Ok(PredictionReport {
        params: *params,
        case,
        gamma_c1,
        gamma_c2,
        gamma,
        c_exact: c.c_exact,
        c_approx: c.c_approx,
        k_lm: c.k_lm,
        amplitude,
        frequency,
        t_star: PI / 2.0 / frequency,
        t_star_asymptotic,
        energy_gap,
        predicted_peak_probability: (amplitude * amplitude).clamp(0.0, 1.0),
    })
}

/// Complete-graph search, the baseline every other case is compared with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompleteGraphReference {
    pub n: u64,
    /// `(-1 - 1/sqrt N, -1 + 1/sqrt N)`
    pub eigenvalues: (f64, f64),
    /// The same pair from diagonalizing `-|s><s| - |w><w|` on span{w, r}.
    pub numeric_eigenvalues: (f64, f64),
    /// `pi / gap = pi sqrt(N) / 2`
    pub t_star: f64,
}

impl CompleteGraphReference {
    fn entries(&self) -> Vec<(&'static str, Value)> {
        use Value::{Int, Real};
        vec![
            ("n", Int(self.n as i64)),
            ("E_minus", Real(self.eigenvalues.0)),
            ("E_plus", Real(self.eigenvalues.1)),
            ("E_minus_numeric", Real(self.numeric_eigenvalues.0)),
            ("E_plus_numeric", Real(self.numeric_eigenvalues.1)),
            ("gamma", Real(1.0 / self.n as f64)),
            ("t_star", Real(self.t_star)),
        ]
    }

    pub fn write_json<W: Write>(&self, w: W) -> io::Result<()> {
        write_record_json(w, &self.entries())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        write_record_csv(w, &self.entries())
    }
}

pub fn complete_graph_reference(n: u64) -> Result<CompleteGraphReference, SrgError> {
    if n < 2 {
        return Err(SrgError::CompleteRange { n });
    }
    let nf = n as f64;
    let s = nf.sqrt();
    // |s> = |w>/sqrt N + sqrt((N-1)/N) |r>
    let (sw, sr) = (1.0 / s, ((nf - 1.0) / nf).sqrt());
    let m = [[-1.0 - sw * sw, -sw * sr], [-sw * sr, -sr * sr]];
    let e = symmetric_eigen(&m);
    Ok(CompleteGraphReference {
        n,
        eigenvalues: (-1.0 - 1.0 / s, -1.0 + 1.0 / s),
        numeric_eigenvalues: (e.values[0], e.values[1]),
        t_star: PI * s / 2.0,
    })
}

/// Largest `|H0 v - (-gamma k) v|` over `v` in {|r>, |c>} at `gamma_c2`.
pub fn case2_degeneracy_residual(params: &SrgParams) -> Result<f64, SrgError> {
    let gamma = critical_gamma(params, CaseTag::Case2)?;
    let c = case2_vector_c(params)?;
    let h0 = case2_leading_order(params, gamma);
    let target = -gamma * params.k as f64;
    let mut worst = 0.0f64;
    for v in [[0.0, 1.0, 0.0], c.components] {
        let hv = linalg::mat_vec(&h0, &v);
        for i in 0..3 {
            worst = worst.max((hv[i] - target * v[i]).abs());
        }
    }
    Ok(worst)
}
