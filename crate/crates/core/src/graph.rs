//! Undirected weighted graphs and their plain-text format.
//!
//! The text format is a header line `n m` followed by `m` lines `u v w`
//! with 0-based vertex ids. Blank lines and anything after `#` are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Absolute tolerance used for all distance comparisons.
pub const EPS: f64 = 1e-9;

/// An undirected edge with a non-negative weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Simple undirected graph with non-negative edge weights.
///
/// Adjacency lists are kept sorted by neighbor id so that every traversal
/// is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    /// Builds a graph, rejecting self loops, duplicate edges, out of range
    /// endpoints and negative or non-finite weights. Connectivity is not
    /// required here; see [`WeightedGraph::require_connected`].
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidEdge { u, v, reason: format!("endpoint out of range for n = {n}") });
            }
            if u == v {
                return Err(Error::InvalidEdge { u, v, reason: "self loop".into() });
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NegativeWeight { u, v, weight: w });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::InvalidEdge { u, v, reason: "duplicate edge".into() });
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
            list.push(Edge { u, v, w });
        }
        for a in &mut adj {
            a.sort_by_key(|&(x, _)| x);
        }
        Ok(WeightedGraph { n, edges: list, adj })
    }

    /// Graph with unit weights.
    pub fn unweighted(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `v` with edge weights, sorted by neighbor id.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Weight of edge `{u, v}` if present.
    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj[u]
            .binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.weight(u, v).is_some()
    }

    /// Smallest edge weight, or `None` for an edgeless graph.
    pub fn min_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.w).min_by(f64::total_cmp)
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    /// Returns a copy with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> WeightedGraph {
        let edges = self.edges.iter().map(|e| (e.u, e.v, e.w * factor));
        WeightedGraph::new(self.n, edges).expect("scaling preserves validity")
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::DisconnectedGraph)
        }
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }
}

/// Parses the text format. The result must be connected.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let g = parse_graph_unchecked(text)?;
    g.require_connected()?;
    Ok(g)
}

/// Parses the text format without the connectivity check.
pub fn parse_graph_unchecked(text: &str) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, message: "missing header".into() })?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(Error::Parse { line: hline, message: "header must be `n m`".into() });
    }
    let n: usize = parse_num(head[0], hline)?;
    let m: usize = parse_num(head[1], hline)?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse { line, message: "edge line must be `u v w`".into() });
        }
        let u: usize = parse_num(parts[0], line)?;
        let v: usize = parse_num(parts[1], line)?;
        let w: f64 = parse_num(parts[2], line)?;
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(Error::Parse { line: hline, message: format!("header announces {m} edges, found {}", edges.len()) });
    }
    WeightedGraph::new(n, edges)
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Parse { line, message: format!("bad number `{s}`") })
}

/// Writes the text format. Weights round-trip exactly.
pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
    }
    out
}
