use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use serde::Serialize;

use crate::numfmt::{self, Num, Nums};
use crate::params::SrgParams;

use super::{DynamicsError, LaplacianMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Full,
    Reduced,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Full => "full",
            EngineKind::Reduced => "reduced",
        })
    }
}

/// Everything needed to reproduce a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceMeta {
    pub engine: EngineKind,
    pub gamma: f64,
    pub n: u64,
    pub k: u64,
    pub family: Option<String>,
    pub params: Option<SrgParams>,
    pub marked: Option<usize>,
    pub laplacian: LaplacianMode,
    /// Largest internal RK4 step (full engine only).
    pub step: Option<f64>,
    pub step_factor: Option<f64>,
    pub max_norm_drift: f64,
}

#[derive(Serialize)]
#[serde(untagged)]
enum MetaValue {
    Text(String),
    Number(Num),
}

impl TraceMeta {
    fn entries(&self) -> Vec<(&'static str, MetaValue)> {
        use MetaValue::{Number, Text};
        let mut e = vec![("engine", Text(self.engine.to_string()))];
        if let Some(f) = &self.family {
            e.push(("family", Text(f.clone())));
        }
        if let Some(p) = &self.params {
            e.push(("params", Text(format!("{} {} {} {}", p.n, p.k, p.lambda, p.mu))));
        }
        e.push(("n", Text(self.n.to_string())));
        e.push(("k", Text(self.k.to_string())));
        e.push(("gamma", Number(Num(self.gamma))));
        if let Some(w) = self.marked {
            e.push(("marked", Text(w.to_string())));
        }
        let lap = match self.laplacian {
            LaplacianMode::AdjacencyOnly => "adjacency",
            LaplacianMode::FullLaplacian => "full",
        };
        e.push(("laplacian", Text(lap.into())));
        if let Some(h) = self.step {
            e.push(("rk4_step", Number(Num(h))));
        }
        if let Some(f) = self.step_factor {
            e.push(("rk4_step_factor", Number(Num(f))));
        }
        e.push(("max_norm_drift", Number(Num(self.max_norm_drift))));
        e
    }
}

/// Probabilities of the marked vertex, its neighbors and its non-neighbors,
/// sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub p_w: Vec<f64>,
    pub p_a: Vec<f64>,
    pub p_b: Vec<f64>,
    pub meta: TraceMeta,
}

impl EvolutionTrace {
    pub(crate) fn with_capacity(n: usize, meta: TraceMeta) -> Self {
        EvolutionTrace {
            times: Vec::with_capacity(n),
            p_w: Vec::with_capacity(n),
            p_a: Vec::with_capacity(n),
            p_b: Vec::with_capacity(n),
            meta,
        }
    }

    pub(crate) fn push(&mut self, t: f64, p: [f64; 3]) {
        self.times.push(t);
        self.p_w.push(p[0]);
        self.p_a.push(p[1]);
        self.p_b.push(p[2]);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest `|p_w + p_a + p_b - 1|` over the samples.
    pub fn max_leakage(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.p_w[i] + self.p_a[i] + self.p_b[i] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest pointwise difference in any of the three probabilities.
    /// Both traces must share their sample times.
    pub fn max_deviation(&self, other: &EvolutionTrace) -> f64 {
        assert_eq!(self.times, other.times, "traces sampled on different grids");
        let col = |a: &[f64], b: &[f64]| {
            a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        };
        col(&self.p_w, &other.p_w)
            .max(col(&self.p_a, &other.p_a))
            .max(col(&self.p_b, &other.p_b))
    }

    /// CSV with `#`-prefixed metadata lines and header `t,p_w,p_a,p_b`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (key, value) in self.meta.entries() {
            let text = match value {
                MetaValue::Text(s) => s,
                MetaValue::Number(Num(x)) => numfmt::float(x),
            };
            writeln!(w, "# {key}={text}")?;
        }
        writeln!(w, "t,p_w,p_a,p_b")?;
        for i in 0..self.len() {
            writeln!(
                w,
                "{},{},{},{}",
                numfmt::float(self.times[i]),
                numfmt::float(self.p_w[i]),
                numfmt::float(self.p_a[i]),
                numfmt::float(self.p_b[i])
            )?;
        }
        w.flush()
    }

    /// JSON object `{"meta": {...}, "t": [...], "p_w": [...], "p_a": [...], "p_b": [...]}`.
    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            meta: BTreeMap<&'static str, MetaValue>,
            t: Nums<'a>,
            p_w: Nums<'a>,
            p_a: Nums<'a>,
            p_b: Nums<'a>,
        }
        let doc = Doc {
            meta: self.meta.entries().into_iter().collect(),
            t: Nums(&self.times),
            p_w: Nums(&self.p_w),
            p_a: Nums(&self.p_a),
            p_b: Nums(&self.p_b),
        };
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)?;
        w.flush()
    }
}

/// Location and height of the success-probability maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub t: f64,
    pub p: f64,
    /// Sample index of the raw maximum.
    pub index: usize,
    /// The raw maximum sits on the first or last sample, so it may not be a
    /// true local maximum.
    pub at_boundary: bool,
}

/// Largest `p_w` sample (earliest on ties), refined by a parabola through it
/// and its two neighbors.
pub fn find_peak(trace: &EvolutionTrace) -> Result<Peak, DynamicsError> {
    let n = trace.len();
    if n < 3 {
        return Err(DynamicsError::TraceTooShort(n));
    }
    let p = &trace.p_w;
    let mut best = 0;
    for i in 1..n {
        if p[i] > p[best] {
            best = i;
        }
    }
    if best == 0 || best == n - 1 {
        return Ok(Peak {
            t: trace.times[best],
            p: p[best],
            index: best,
            at_boundary: true,
        });
    }
    let (t0, t1, t2) = (trace.times[best - 1], trace.times[best], trace.times[best + 1]);
    let (p0, p1, p2) = (p[best - 1], p[best], p[best + 1]);
    // Newton form: p(t) = p0 + d1 (t - t0) + c (t - t0)(t - t1)
    let d1 = (p1 - p0) / (t1 - t0);
    let d2 = (p2 - p1) / (t2 - t1);
    let c = (d2 - d1) / (t2 - t0);
    let (t, v) = if c < 0.0 {
        let tv = (0.5 * (t0 + t1) - d1 / (2.0 * c)).clamp(t0, t2);
        (tv, p0 + d1 * (tv - t0) + c * (tv - t0) * (tv - t1))
    } else {
        (t1, p1)
    };
    Ok(Peak {
        t,
        p: v.max(p1),
        index: best,
        at_boundary: false,
    })
}
