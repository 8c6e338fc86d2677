//! Strongly regular graph parameters and the closed-form families.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SrgError {
    #[error("degree k = {k} with N = {n} leaves no non-adjacent pairs (mu undefined)")]
    NoNonAdjacentPairs { n: u64, k: u64 },
    #[error("invalid parameter tuple ({n}, {k}, {lambda}, {mu}): {reason}")]
    InvalidTuple {
        n: u64,
        k: u64,
        lambda: u64,
        mu: u64,
        reason: &'static str,
    },
    #[error("parameters ({n}, {k}, {lambda}, {mu}) violate k(k - lambda - 1) = (N - k - 1) mu")]
    Infeasible { n: u64, k: u64, lambda: u64, mu: u64 },
    #[error("Paley order {q} is not a prime power")]
    PaleyNotPrimePower { q: u64 },
    #[error("Paley order {q} is not congruent to 1 mod 4")]
    PaleyNotOneModFour { q: u64 },
    #[error("Latin square family needs 2 <= d <= t, got t = {t}, d = {d}")]
    LatinRange { t: u64, d: u64 },
    #[error("triangular family needs m >= 5, got m = {m}")]
    TriangularRange { m: u64 },
    #[error("complete graph needs N >= 2, got N = {n}")]
    CompleteRange { n: u64 },
    #[error("family parameter must be positive")]
    NonPositive,
}

/// The tuple (N, k, lambda, mu).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl SrgParams {
    pub const fn new(n: u64, k: u64, lambda: u64, mu: u64) -> Self {
        SrgParams { n, k, lambda, mu }
    }

    /// Builds a tuple and insists that it passes [`check_feasibility`].
    pub fn feasible(n: u64, k: u64, lambda: u64, mu: u64) -> Result<Self, SrgError> {
        let p = SrgParams::new(n, k, lambda, mu);
        if check_feasibility(&p)? {
            Ok(p)
        } else {
            Err(SrgError::Infeasible { n, k, lambda, mu })
        }
    }

    /// Number of vertices at distance two from any fixed vertex.
    pub fn non_neighbors(&self) -> u64 {
        self.n - self.k - 1
    }

    /// Finite-size form of the degree lower bound: k^2 > (N - k - 1) mu.
    pub fn satisfies_degree_bound(&self) -> bool {
        (self.k as u128).pow(2) > self.non_neighbors() as u128 * self.mu as u128
    }
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.n, self.k, self.lambda, self.mu)
    }
}

/// Exact test of the counting identity k(k - lambda - 1) = (N - k - 1) mu.
///
/// Tuples that break the basic range invariants are an error rather than
/// `false`; in particular `k >= N - 1` is reported as [`SrgError::NoNonAdjacentPairs`].
pub fn check_feasibility(p: &SrgParams) -> Result<bool, SrgError> {
    let invalid = |reason| SrgError::InvalidTuple {
        n: p.n,
        k: p.k,
        lambda: p.lambda,
        mu: p.mu,
        reason,
    };
    if p.k == 0 {
        return Err(invalid("degree must be positive"));
    }
    if p.k + 1 >= p.n {
        return Err(SrgError::NoNonAdjacentPairs { n: p.n, k: p.k });
    }
    if p.lambda > p.k - 1 {
        return Err(invalid("lambda must not exceed k - 1"));
    }
    if p.mu == 0 || p.mu > p.k {
        return Err(invalid("mu must lie in 1..=k"));
    }
    let lhs = p.k as u128 * (p.k - p.lambda - 1) as u128;
    let rhs = (p.n - p.k - 1) as u128 * p.mu as u128;
    Ok(lhs == rhs)
}

/// Paley family: (4t + 1, 2t, t - 1, t). Requires 4t + 1 to be a prime power.
pub fn paley_params(t: u64) -> Result<SrgParams, SrgError> {
    if t == 0 {
        return Err(SrgError::NonPositive);
    }
    let q = 4 * t + 1;
    if gf::prime_power(q).is_none() {
        return Err(SrgError::PaleyNotPrimePower { q });
    }
    if q % 4 != 1 {
        return Err(SrgError::PaleyNotOneModFour { q });
    }
    SrgParams::feasible(q, 2 * t, t - 1, t)
}

/// Latin square family: (t^2, d(t - 1), d^2 - 3d + t, d(d - 1)) for 2 <= d <= t.
pub fn latin_params(t: u64, d: u64) -> Result<SrgParams, SrgError> {
    if d < 2 || d > t {
        return Err(SrgError::LatinRange { t, d });
    }
    let lambda = (d * d + t)
        .checked_sub(3 * d)
        .ok_or(SrgError::LatinRange { t, d })?;
    SrgParams::feasible(t * t, d * (t - 1), lambda, d * (d - 1))
}

/// Triangular family T(m), the line graph of K_m: (m(m-1)/2, 2(m-2), m-2, 4).
pub fn triangular_params(m: u64) -> Result<SrgParams, SrgError> {
    if m < 5 {
        return Err(SrgError::TriangularRange { m });
    }
    SrgParams::feasible(m * (m - 1) / 2, 2 * (m - 2), m - 2, 4)
}

/// A concrete graph family together with its defining parameters.
///
/// The complete graph is its own family: it is the baseline search problem
/// but not a strongly regular graph in the sense used here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GraphFamily {
    Complete { n: u64 },
    Paley { q: u64 },
    #[serde(rename = "latin")]
    LatinSquare { t: u64, d: u64 },
    Triangular { m: u64 },
}

impl GraphFamily {
    /// Validates the family arguments.
    pub fn validate(&self) -> Result<(), SrgError> {
        match *self {
            GraphFamily::Complete { n } if n < 2 => Err(SrgError::CompleteRange { n }),
            GraphFamily::Complete { .. } => Ok(()),
            _ => self.srg_params().map(|_| ()),
        }
    }

    /// Parameters of the family member; `None` for the complete graph.
    pub fn params(&self) -> Result<Option<SrgParams>, SrgError> {
        match self {
            GraphFamily::Complete { .. } => self.validate().map(|_| None),
            _ => self.srg_params().map(Some),
        }
    }

    fn srg_params(&self) -> Result<SrgParams, SrgError> {
        match *self {
            GraphFamily::Complete { n } => Err(SrgError::NoNonAdjacentPairs {
                n,
                k: n.saturating_sub(1),
            }),
            GraphFamily::Paley { q } => {
                if gf::prime_power(q).is_none() {
                    return Err(SrgError::PaleyNotPrimePower { q });
                }
                if q % 4 != 1 {
                    return Err(SrgError::PaleyNotOneModFour { q });
                }
                paley_params((q - 1) / 4)
            }
            GraphFamily::LatinSquare { t, d } => latin_params(t, d),
            GraphFamily::Triangular { m } => triangular_params(m),
        }
    }

    pub fn vertex_count(&self) -> u64 {
        match *self {
            GraphFamily::Complete { n } => n,
            GraphFamily::Paley { q } => q,
            GraphFamily::LatinSquare { t, .. } => t * t,
            GraphFamily::Triangular { m } => m * m.saturating_sub(1) / 2,
        }
    }

    /// Common degree of every vertex.
    pub fn degree(&self) -> u64 {
        match *self {
            GraphFamily::Complete { n } => n.saturating_sub(1),
            GraphFamily::Paley { q } => q.saturating_sub(1) / 2,
            GraphFamily::LatinSquare { t, d } => d * t.saturating_sub(1),
            GraphFamily::Triangular { m } => 2 * m.saturating_sub(2),
        }
    }

    /// Number of common neighbors of two adjacent vertices.
    pub fn lambda(&self) -> Result<u64, SrgError> {
        match *self {
            GraphFamily::Complete { n } => {
                self.validate()?;
                Ok(n - 2)
            }
            _ => Ok(self.srg_params()?.lambda),
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphFamily::Complete { n } => write!(f, "complete n={n}"),
            GraphFamily::Paley { q } => write!(f, "paley q={q}"),
            GraphFamily::LatinSquare { t, d } => write!(f, "latin t={t} d={d}"),
            GraphFamily::Triangular { m } => write!(f, "triangular m={m}"),
        }
    }
}
