//! Simple undirected graphs, degree invariants, deterministic generators and
//! the edge-list file format.
//!
//! Vertices are dense integers `0..n`. Edges are stored canonically (`u < v`)
//! and sorted, so two graphs with the same edge set compare equal.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{frac, Rational};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) is a self-loop")]
    SelfLoop { u: usize, v: usize },
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("edge ({u}, {v}) appears twice")]
    DuplicateEdge { u: usize, v: usize },
    #[error("graph has no edges; zeta is undefined")]
    NoEdges,
    #[error("invalid {family} parameters: {reason}")]
    InvalidFamily { family: &'static str, reason: String },
    #[error(transparent)]
    File(#[from] EdgeListError),
}

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: malformed ({reason})")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: endpoint {endpoint} is not below n = {n}")]
    EndpointOutOfRange { line: usize, endpoint: usize, n: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: self-loop on vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("header announces {expected} edges but the file lists {found}")]
    EdgeCount { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    degrees: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list in any order and orientation.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop { u, v });
            }
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge { u: e.0, v: e.1 });
            }
        }
        Ok(Self::from_canonical(n, set.into_iter().collect()))
    }

    /// Edges already sorted, distinct and with `u < v < n`.
    pub(crate) fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degrees = vec![0usize; n];
        for &(u, v) in &edges {
            degrees[u] += 1;
            degrees[v] += 1;
        }
        Graph { n, edges, degrees }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats::from_degrees(self.n, self.m(), &self.degrees)
    }

    /// Σ over edges of d(u) + d(v); equals Σ₂ by double counting.
    pub fn edge_degree_sum(&self) -> u128 {
        self.edges
            .iter()
            .map(|&(u, v)| (self.degrees[u] + self.degrees[v]) as u128)
            .sum()
    }

    /// ζ² = Σ₂ / m², exact.
    pub fn zeta_squared(&self) -> Result<Rational, GraphError> {
        self.stats().zeta_squared()
    }

    /// ζ = √Σ₂ / m as a float, for reports.
    pub fn zeta(&self) -> Result<f64, GraphError> {
        let st = self.stats();
        if st.m == 0 {
            return Err(GraphError::NoEdges);
        }
        Ok((st.sigma2 as f64).sqrt() / st.m as f64)
    }

    /// Disjoint union, relabelling the second graph after the first.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Self::from_canonical(self.n + other.n, edges)
    }

    /// Canonical edge-list text: `"n m"` then one `"u v"` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(8 * (self.m() + 1));
        let _ = writeln!(out, "{} {}", self.n, self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (hline, header) = lines.next().ok_or(EdgeListError::Malformed {
            line: 1,
            reason: "missing header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut set = BTreeSet::new();
        let mut found = 0usize;
        for (line, content) in lines {
            if content.trim().is_empty() {
                continue;
            }
            let (u, v) = parse_pair(line, content)?;
            found += 1;
            if u == v {
                return Err(EdgeListError::SelfLoop { line, v: u });
            }
            for endpoint in [u, v] {
                if endpoint >= n {
                    return Err(EdgeListError::EndpointOutOfRange { line, endpoint, n });
                }
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(EdgeListError::DuplicateEdge { line, u: e.0, v: e.1 });
            }
        }
        if found != m {
            return Err(EdgeListError::EdgeCount { expected: m, found });
        }
        Ok(Graph::from_canonical(n, set.into_iter().collect()))
    }

    pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph, EdgeListError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| EdgeListError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_edge_list(&text)
    }

    pub fn save_edge_list(&self, path: impl AsRef<Path>) -> Result<(), EdgeListError> {
        let path = path.as_ref();
        fs::write(path, self.to_edge_list()).map_err(|source| EdgeListError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

fn parse_pair(line: usize, content: &str) -> Result<(usize, usize), EdgeListError> {
    let malformed = |reason: &str| EdgeListError::Malformed {
        line,
        reason: reason.to_string(),
    };
    let mut parts = content.split_whitespace();
    let a = parts.next().ok_or_else(|| malformed("expected two integers"))?;
    let b = parts.next().ok_or_else(|| malformed("expected two integers"))?;
    if parts.next().is_some() {
        return Err(malformed("trailing tokens"));
    }
    let a = a.parse().map_err(|_| malformed("not a non-negative integer"))?;
    let b = b.parse().map_err(|_| malformed("not a non-negative integer"))?;
    Ok((a, b))
}

/// Degree invariants of a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    /// Σ₂, the sum of squared degrees (first Zagreb index).
    pub sigma2: u128,
    /// π₃, the number of unordered pairs of adjacent edges.
    pub wedges: u128,
    pub max_degree: usize,
}

impl GraphStats {
    pub fn from_degrees(n: usize, m: usize, degrees: &[usize]) -> Self {
        let sigma2 = degrees.iter().map(|&d| (d as u128) * (d as u128)).sum();
        let wedges = degrees
            .iter()
            .map(|&d| (d as u128) * (d as u128).saturating_sub(1) / 2)
            .sum();
        GraphStats {
            n,
            m,
            sigma2,
            wedges,
            max_degree: degrees.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn zeta_squared(&self) -> Result<Rational, GraphError> {
        if self.m == 0 {
            return Err(GraphError::NoEdges);
        }
        Ok(frac(self.sigma2, (self.m as u128) * (self.m as u128)))
    }
}

/// One step of a threshold-graph creation sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdStep {
    Isolated,
    Dominating,
}

impl ThresholdStep {
    /// Parses a string over {I, D} (case-insensitive).
    pub fn parse_sequence(s: &str) -> Result<Vec<ThresholdStep>, GraphError> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(ThresholdStep::Isolated),
                'D' => Ok(ThresholdStep::Dominating),
                other => Err(GraphError::InvalidFamily {
                    family: "threshold",
                    reason: format!("creation sequence may only contain I or D, found {other:?}"),
                }),
            })
            .collect()
    }
}

/// Deterministic graph families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Complete(usize),
    /// Star on `n` vertices: centre 0 joined to `1..n`.
    Star(usize),
    Path(usize),
    Cycle(usize),
    /// d-regular circulant: i ~ i±1, …, i±⌊d/2⌋, plus i ~ i+n/2 when d is odd.
    RegularCirculant { n: usize, d: usize },
    Threshold(Vec<ThresholdStep>),
    DisjointUnion(Vec<Family>),
}

impl Family {
    pub fn generate(&self) -> Result<Graph, GraphError> {
        match self {
            Family::Complete(n) => {
                let n = *n;
                Ok(Graph::from_canonical(
                    n,
                    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
                ))
            }
            Family::Star(n) => {
                if *n == 0 {
                    return Err(invalid("star", "needs at least one vertex"));
                }
                Ok(Graph::from_canonical(*n, (1..*n).map(|v| (0, v)).collect()))
            }
            Family::Path(n) => Ok(Graph::from_canonical(
                *n,
                (1..*n).map(|v| (v - 1, v)).collect(),
            )),
            Family::Cycle(n) => {
                if *n < 3 {
                    return Err(invalid("cycle", "needs n >= 3"));
                }
                Graph::new(*n, (0..*n).map(|v| (v, (v + 1) % n)))
            }
            Family::RegularCirculant { n, d } => circulant(*n, *d),
            Family::Threshold(steps) => {
                let mut edges = Vec::new();
                for (v, step) in steps.iter().enumerate() {
                    if *step == ThresholdStep::Dominating {
                        edges.extend((0..v).map(|u| (u, v)));
                    }
                }
                edges.sort_unstable();
                Ok(Graph::from_canonical(steps.len(), edges))
            }
            Family::DisjointUnion(parts) => {
                let mut acc = Graph::empty(0);
                for part in parts {
                    acc = acc.disjoint_union(&part.generate()?);
                }
                Ok(acc)
            }
        }
    }
}

fn invalid(family: &'static str, reason: &str) -> GraphError {
    GraphError::InvalidFamily {
        family,
        reason: reason.to_string(),
    }
}

fn circulant(n: usize, d: usize) -> Result<Graph, GraphError> {
    if d >= n {
        return Err(invalid("regular_circulant", "degree d must be below n"));
    }
    if d % 2 == 1 && n % 2 == 1 {
        return Err(invalid(
            "regular_circulant",
            "odd degree needs an even number of vertices (n*d must be even)",
        ));
    }
    let mut edges = Vec::with_capacity(n * d / 2);
    for v in 0..n {
        for j in 1..=d / 2 {
            let w = (v + j) % n;
            edges.push((v.min(w), v.max(w)));
        }
        if d % 2 == 1 && v < n / 2 {
            edges.push((v, v + n / 2));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let g = Graph::from_canonical(n, edges);
    debug_assert!(g.degrees().iter().all(|&x| x == d));
    Ok(g)
}
