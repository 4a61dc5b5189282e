//! Shortest paths, balls, diameters and induced subgraphs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{WeightedGraph, EPS};

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapItem {
    dist: f64,
    v: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse so the smallest (dist, id) pops first.
        other.dist.total_cmp(&self.dist).then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source distances with a deterministic shortest-path tree.
///
/// The parent of `v` is the smallest-id neighbor, among those settled before
/// `v`, that lies on a shortest path to `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMap {
    pub source: usize,
    pub dist: Vec<f64>,
    pub parent: Vec<Option<usize>>,
}

impl DistanceMap {
    pub fn reachable(&self, v: usize) -> bool {
        self.dist[v].is_finite()
    }

    /// Tree path from the source to `v`, or `None` when unreachable.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        if !self.reachable(v) {
            return None;
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

/// A vertex sequence together with its total length.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub length: f64,
}

fn dijkstra_core(g: &WeightedGraph, sources: &[(usize, f64)], limit: f64, allowed: Option<&[bool]>) -> DistanceMap {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut settled = vec![false; n];
    let mut seed = vec![f64::NAN; n];
    let mut heap = BinaryHeap::new();
    for &(s, d) in sources {
        if d < dist[s] {
            seed[s] = d;
            dist[s] = d;
            heap.push(HeapItem { dist: d, v: s });
        }
    }
    while let Some(HeapItem { dist: d, v }) = heap.pop() {
        if settled[v] || d > dist[v] {
            continue;
        }
        if d > limit {
            break;
        }
        settled[v] = true;
        // Smallest-id settled predecessor on a shortest path; sources keep no parent.
        if seed[v] != d {
            for &(u, w) in g.neighbors(v) {
                if settled[u] && (dist[u] + w - d).abs() <= EPS {
                    parent[v] = Some(u);
                    break;
                }
            }
        }
        for &(u, w) in g.neighbors(v) {
            if settled[u] {
                continue;
            }
            if let Some(mask) = allowed {
                if !mask[u] {
                    continue;
                }
            }
            let nd = d + w;
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(HeapItem { dist: nd, v: u });
            }
        }
    }
    for v in 0..n {
        if !settled[v] {
            dist[v] = f64::INFINITY;
            parent[v] = None;
        }
    }
    DistanceMap { source: sources.first().map_or(0, |s| s.0), dist, parent }
}

/// Dijkstra from `src` with the smallest-id parent tie break.
pub fn shortest_paths(g: &WeightedGraph, src: usize) -> DistanceMap {
    dijkstra_core(g, &[(src, 0.0)], f64::INFINITY, None)
}

/// Dijkstra that stops once distances exceed `limit`; farther vertices get
/// infinite distance.
pub fn shortest_paths_within(g: &WeightedGraph, src: usize, limit: f64) -> DistanceMap {
    dijkstra_core(g, &[(src, 0.0)], limit + EPS, None)
}

/// Distances from a set of sources, each starting at the given offset.
pub fn multi_source_distances(g: &WeightedGraph, sources: &[(usize, f64)]) -> Vec<f64> {
    dijkstra_core(g, sources, f64::INFINITY, None).dist
}

/// Distances to the nearest vertex of `set`, travelling only inside `within`.
pub fn set_distances_inside(g: &WeightedGraph, set: &[usize], within: &[bool]) -> Vec<f64> {
    let sources: Vec<(usize, f64)> = set.iter().map(|&s| (s, 0.0)).collect();
    dijkstra_core(g, &sources, f64::INFINITY, Some(within)).dist
}

/// Distances from `src` using only vertices where `within` is true.
pub fn shortest_paths_inside(g: &WeightedGraph, src: usize, within: &[bool]) -> DistanceMap {
    dijkstra_core(g, &[(src, 0.0)], f64::INFINITY, Some(within))
}

/// Closed ball `{u : d(c, u) <= r}` in increasing id order.
pub fn ball(g: &WeightedGraph, c: usize, r: f64) -> Vec<usize> {
    let dm = shortest_paths_within(g, c, r);
    (0..g.n()).filter(|&u| dm.dist[u] <= r + EPS).collect()
}

/// The path from `u` to `v` in the shortest-path tree rooted at `u`.
pub fn canonical_shortest_path(g: &WeightedGraph, u: usize, v: usize) -> Result<Path> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let dm = shortest_paths(g, u);
    let vertices = dm.path_to(v).ok_or(Error::DisconnectedGraph)?;
    Ok(Path { vertices, length: dm.dist[v] })
}

/// Largest distance in `g` between two vertices of `cluster`.
pub fn weak_diameter(g: &WeightedGraph, cluster: &[usize]) -> Result<f64> {
    if cluster.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let mut best: f64 = 0.0;
    for &a in cluster {
        g.check_vertex(a)?;
        let dm = shortest_paths(g, a);
        for &b in cluster {
            best = best.max(dm.dist[b]);
        }
    }
    Ok(best)
}

/// Diameter of the induced subgraph `G[cluster]`; infinite when it is
/// disconnected.
pub fn strong_diameter(g: &WeightedGraph, cluster: &[usize]) -> Result<f64> {
    if cluster.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let mut mask = vec![false; g.n()];
    for &a in cluster {
        g.check_vertex(a)?;
        mask[a] = true;
    }
    let mut best: f64 = 0.0;
    for &a in cluster {
        let dm = shortest_paths_inside(g, a, &mask);
        for &b in cluster {
            best = best.max(dm.dist[b]);
        }
    }
    Ok(best)
}

/// Induced subgraph on `set`. Vertex `i` of the result is `remap[i]` in `g`;
/// the remap table is sorted.
pub fn induced_subgraph(g: &WeightedGraph, set: &[usize]) -> Result<(WeightedGraph, Vec<usize>)> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut remap: Vec<usize> = set.to_vec();
    remap.sort_unstable();
    remap.dedup();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in remap.iter().enumerate() {
        g.check_vertex(v)?;
        index[v] = i;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|e| index[e.u] != usize::MAX && index[e.v] != usize::MAX)
        .map(|e| (index[e.u], index[e.v], e.w));
    Ok((WeightedGraph::new(remap.len(), edges)?, remap))
}

/// Connected components of `G[set]`, each sorted, ordered by smallest member.
pub fn connected_components(g: &WeightedGraph, set: &[usize]) -> Vec<Vec<usize>> {
    let mut mask = vec![false; g.n()];
    for &v in set {
        mask[v] = true;
    }
    let mut seen = vec![false; g.n()];
    let mut order: Vec<usize> = set.to_vec();
    order.sort_unstable();
    let mut comps = Vec::new();
    for &s in &order {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(u, _) in g.neighbors(v) {
                if mask[u] && !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Precomputed all-pairs shortest paths, shared by the verifiers.
#[derive(Debug, Clone)]
pub struct Metric {
    maps: Vec<DistanceMap>,
}

impl Metric {
    pub fn new(g: &WeightedGraph) -> Self {
        let maps = (0..g.n()).into_par_iter().map(|s| shortest_paths(g, s)).collect();
        Metric { maps }
    }

    pub fn n(&self) -> usize {
        self.maps.len()
    }

    pub fn d(&self, u: usize, v: usize) -> f64 {
        self.maps[u].dist[v]
    }

    pub fn from(&self, u: usize) -> &DistanceMap {
        &self.maps[u]
    }

    pub fn diameter(&self) -> f64 {
        self.maps
            .iter()
            .flat_map(|m| m.dist.iter().copied())
            .fold(0.0, f64::max)
    }

    /// Smallest distance between two distinct vertices.
    pub fn min_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (u, m) in self.maps.iter().enumerate() {
            for (v, &d) in m.dist.iter().enumerate() {
                if u != v {
                    best = Some(best.map_or(d, |b: f64| b.min(d)));
                }
            }
        }
        best
    }

    pub fn weak_diameter(&self, cluster: &[usize]) -> f64 {
        let mut best: f64 = 0.0;
        for &a in cluster {
            for &b in cluster {
                best = best.max(self.d(a, b));
            }
        }
        best
    }
}
