//! Undirected simple graphs, the family generators, and the brute-force
//! strong-regularity oracle.
//!
//! Adjacency is kept twice: a packed bit matrix for O(1) pair queries and
//! word-parallel common-neighbor counts, and CSR neighbor lists (sorted) for
//! O(k) row traversal in matrix-vector products.

use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::exec::{self, Execution};
use crate::gf::{GaloisField, GfError};
use crate::params::{GraphFamily, SrgError, SrgParams};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error(transparent)]
    Params(#[from] SrgError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("Latin square graphs are only built for d in {{2, 3}}, got d = {0}")]
    LatinUnsupported(u64),
    #[error("Paley graphs need a field order congruent to 1 mod 4, got {0}")]
    PaleyOrder(u64),
    #[error("invalid adjacency: {0}")]
    InvalidAdjacency(String),
    #[error("malformed edge list at line {line}: {reason}")]
    EdgeListFormat { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Why a graph failed the strong-regularity check.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SrgViolation {
    #[error("graph has {n} vertices; at least 4 are needed")]
    TooSmall { n: usize },
    #[error("not regular: vertex {vertex} has degree {degree}, vertex 0 has {expected}")]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },
    #[error("no adjacent pairs (lambda undefined)")]
    NoAdjacentPairs,
    #[error("no non-adjacent pairs (mu undefined)")]
    NoNonAdjacentPairs,
    #[error("adjacent pair ({u}, {v}) has {common} common neighbors, expected lambda = {expected}")]
    LambdaMismatch {
        u: usize,
        v: usize,
        common: usize,
        expected: usize,
    },
    #[error("non-adjacent pair ({u}, {v}) has {common} common neighbors, expected mu = {expected}")]
    MuMismatch {
        u: usize,
        v: usize,
        common: usize,
        expected: usize,
    },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    words: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from per-vertex neighbor lists, checking that the lists
    /// are in range, loop-free, duplicate-free and symmetric.
    pub fn from_neighbor_lists(mut lists: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        let n = lists.len();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for (u, row) in lists.iter_mut().enumerate() {
            row.sort_unstable();
            for (i, &v) in row.iter().enumerate() {
                let v = v as usize;
                if v >= n {
                    return Err(GraphError::InvalidAdjacency(format!(
                        "vertex {u} lists neighbor {v} outside 0..{n}"
                    )));
                }
                if v == u {
                    return Err(GraphError::InvalidAdjacency(format!("self-loop at {u}")));
                }
                if i > 0 && row[i - 1] as usize == v {
                    return Err(GraphError::InvalidAdjacency(format!(
                        "duplicate edge ({u}, {v})"
                    )));
                }
                bits[u * words + v / 64] |= 1 << (v % 64);
            }
        }
        for (u, row) in lists.iter().enumerate() {
            for &v in row {
                let v = v as usize;
                if bits[v * words + u / 64] & (1 << (u % 64)) == 0 {
                    return Err(GraphError::InvalidAdjacency(format!(
                        "edge ({u}, {v}) is not symmetric"
                    )));
                }
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut neighbors = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for row in lists {
            neighbors.extend_from_slice(&row);
            offsets.push(neighbors.len());
        }
        Ok(Graph {
            n,
            offsets,
            neighbors,
            words,
            bits,
        })
    }

    /// Builds a graph from an undirected edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::InvalidAdjacency(format!(
                    "edge ({u}, {v}) outside 0..{n}"
                )));
            }
            lists[u].push(v as u32);
            if u != v {
                lists[v].push(u as u32);
            }
        }
        Self::from_neighbor_lists(lists)
    }

    /// Builds a graph whose adjacency is given by a symmetric predicate.
    /// Rows are generated independently, in parallel when allowed.
    pub fn from_predicate<F>(n: usize, exec: Execution, adjacent: F) -> Result<Self, GraphError>
    where
        F: Fn(usize, usize) -> bool + Sync + Send,
    {
        let lists = exec::map_range(exec, n, |u| {
            (0..n)
                .filter(|&v| v != u && adjacent(u, v))
                .map(|v| v as u32)
                .collect::<Vec<_>>()
        });
        Self::from_neighbor_lists(lists)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// The common degree, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == k).then_some(k)
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    fn row_bits(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    /// Number of vertices adjacent to both `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        self.row_bits(u)
            .iter()
            .zip(self.row_bits(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// The complementary graph on the same vertex set.
    pub fn complement(&self) -> Graph {
        let lists = (0..self.n)
            .map(|u| {
                (0..self.n)
                    .filter(|&v| v != u && !self.adjacent(u, v))
                    .map(|v| v as u32)
                    .collect()
            })
            .collect();
        Self::from_neighbor_lists(lists).expect("complement of a simple graph is simple")
    }
}

/// K_n. Degree n - 1 everywhere.
pub fn build_complete(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(SrgError::CompleteRange { n: n as u64 }.into());
    }
    let lists = (0..n)
        .map(|u| (0..n).filter(|&v| v != u).map(|v| v as u32).collect())
        .collect();
    Graph::from_neighbor_lists(lists)
}

/// Paley graph over `field`: vertices are field elements in enumeration
/// order, adjacent iff their difference is a nonzero square.
pub fn build_paley(field: &GaloisField) -> Result<Graph, GraphError> {
    let q = field.order() as u64;
    if q % 4 != 1 {
        return Err(GraphError::PaleyOrder(q));
    }
    let squares: Vec<_> = field
        .nonzero_square_indices()
        .into_iter()
        .map(|i| field.element(i))
        .collect::<Result<_, _>>()?;
    let lists = field
        .elements()
        .map(|x| {
            squares
                .iter()
                .map(|s| field.index_of(&field.add(&x, s)))
                .collect()
        })
        .collect();
    Graph::from_neighbor_lists(lists)
}

/// Paley graph of order `q`, building the field on the way.
pub fn paley_graph(q: u64) -> Result<Graph, GraphError> {
    GraphFamily::Paley { q }.validate()?;
    build_paley(&GaloisField::with_order(q)?)
}

/// Latin square graph on a t x t grid, vertex `row * t + col`.
///
/// `d = 2` joins cells sharing a row or column (the rook's graph); `d = 3`
/// additionally joins cells carrying the same symbol of the cyclic square
/// `(row + col) mod t`.
pub fn build_latin(t: u64, d: u64) -> Result<Graph, GraphError> {
    if !(2..=3).contains(&d) {
        return Err(GraphError::LatinUnsupported(d));
    }
    crate::params::latin_params(t, d)?;
    let t = t as usize;
    let symbols = d == 3;
    Graph::from_predicate(t * t, Execution::default(), |u, v| {
        let (r1, c1) = (u / t, u % t);
        let (r2, c2) = (v / t, v % t);
        r1 == r2 || c1 == c2 || (symbols && (r1 + c1) % t == (r2 + c2) % t)
    })
}

/// Triangular graph T(m): 2-subsets of `0..m` in lexicographic order,
/// adjacent iff they intersect.
pub fn build_triangular(m: u64) -> Result<Graph, GraphError> {
    crate::params::triangular_params(m)?;
    let m = m as usize;
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .collect();
    Graph::from_predicate(pairs.len(), Execution::default(), |u, v| {
        let (a, b) = pairs[u];
        let (c, d) = pairs[v];
        a == c || a == d || b == c || b == d
    })
}

pub fn build_family(family: &GraphFamily) -> Result<Graph, GraphError> {
    match *family {
        GraphFamily::Complete { n } => build_complete(n as usize),
        GraphFamily::Paley { q } => paley_graph(q),
        GraphFamily::LatinSquare { t, d } => build_latin(t, d),
        GraphFamily::Triangular { m } => build_triangular(m),
    }
}

/// Brute-force strong-regularity check.
///
/// Counts common neighbors of every vertex pair and returns (N, k, lambda, mu)
/// if the counts are constant over adjacent and over non-adjacent pairs.
/// Otherwise reports the first violating pair in lexicographic order. Rows are
/// scanned in parallel when allowed; the verdict does not depend on that.
pub fn verify_srg(g: &Graph, exec: Execution) -> Result<SrgParams, SrgViolation> {
    let n = g.vertex_count();
    if n < 4 {
        return Err(SrgViolation::TooSmall { n });
    }
    let k = g.degree(0);
    if let Some(v) = (0..n).find(|&v| g.degree(v) != k) {
        return Err(SrgViolation::NotRegular {
            vertex: v,
            degree: g.degree(v),
            expected: k,
        });
    }
    if k == 0 {
        return Err(SrgViolation::NoAdjacentPairs);
    }
    if k == n - 1 {
        return Err(SrgViolation::NoNonAdjacentPairs);
    }
    // reference counts come from the lexicographically first pair of each kind
    let first_adj = g.neighbors(0)[0] as usize;
    let first_non = (1..n).find(|&v| !g.adjacent(0, v)).expect("k < n - 1");
    let lambda = g.common_neighbors(0, first_adj);
    let mu = g.common_neighbors(0, first_non);

    let first_bad = exec::map_range(exec, n, |u| {
        (u + 1..n).find_map(|v| {
            let common = g.common_neighbors(u, v);
            if g.adjacent(u, v) {
                (common != lambda).then_some(SrgViolation::LambdaMismatch {
                    u,
                    v,
                    common,
                    expected: lambda,
                })
            } else {
                (common != mu).then_some(SrgViolation::MuMismatch {
                    u,
                    v,
                    common,
                    expected: mu,
                })
            }
        })
    });
    if let Some(bad) = first_bad.into_iter().flatten().next() {
        return Err(bad);
    }
    Ok(SrgParams::new(n as u64, k as u64, lambda as u64, mu as u64))
}

/// Header line of the edge-list format: `N k lambda mu`, with `-` for an
/// undefined entry (mu of a complete graph).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListHeader {
    pub n: u64,
    pub k: u64,
    pub lambda: Option<u64>,
    pub mu: Option<u64>,
}

impl From<SrgParams> for EdgeListHeader {
    fn from(p: SrgParams) -> Self {
        EdgeListHeader {
            n: p.n,
            k: p.k,
            lambda: Some(p.lambda),
            mu: Some(p.mu),
        }
    }
}

impl fmt::Display for EdgeListHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<u64>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
        write!(f, "{} {} {} {}", self.n, self.k, opt(self.lambda), opt(self.mu))
    }
}

/// Writes the header line followed by one `u v` line per edge, `u < v`, sorted.
pub fn write_edge_list<W: Write>(
    mut w: W,
    g: &Graph,
    header: &EdgeListHeader,
) -> io::Result<()> {
    writeln!(w, "{header}")?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()
}

/// Parses the edge-list format back into a header and a graph.
pub fn read_edge_list<R: BufRead>(r: R) -> Result<(EdgeListHeader, Graph), GraphError> {
    let mut lines = r.lines().enumerate();
    let bad = |line: usize, reason: &str| GraphError::EdgeListFormat {
        line: line + 1,
        reason: reason.to_string(),
    };
    let (_, first) = lines.next().ok_or_else(|| bad(0, "empty input"))?;
    let first = first?;
    let fields: Vec<&str> = first.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(bad(0, "header needs four fields"));
    }
    let num = |s: &str| s.parse::<u64>().map_err(|_| bad(0, "bad header number"));
    let opt = |s: &str| if s == "-" { Ok(None) } else { num(s).map(Some) };
    let header = EdgeListHeader {
        n: num(fields[0])?,
        k: num(fields[1])?,
        lambda: opt(fields[2])?,
        mu: opt(fields[3])?,
    };
    let mut edges = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) if u < v => edges.push((u, v)),
            _ => return Err(bad(i, "expected `u v` with u < v")),
        }
    }
    Ok((header, Graph::from_edges(header.n as usize, &edges)?))
}
