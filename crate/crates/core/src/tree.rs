//! Ring-based partitions of weighted trees.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::partition::Partition;

/// A tree with a chosen root, parent pointers and root distances.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    /// Weighted distance from the root.
    pub depth: Vec<f64>,
    /// Vertices in BFS order from the root.
    pub order: Vec<usize>,
}

/// True when `g` is connected with exactly `n - 1` edges.
pub fn is_tree(g: &WeightedGraph) -> bool {
    g.n() > 0 && g.m() == g.n() - 1 && g.is_connected()
}

impl RootedTree {
    pub fn new(g: &WeightedGraph, root: usize) -> Result<Self> {
        if !is_tree(g) {
            return Err(Error::NotATree);
        }
        g.check_vertex(root)?;
        let n = g.n();
        let mut parent = vec![None; n];
        let mut depth = vec![0.0; n];
        let mut seen = vec![false; n];
        let mut order = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &(u, w) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    depth[u] = depth[v] + w;
                    order.push(u);
                }
            }
        }
        Ok(RootedTree { root, parent, depth, order })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }
}

fn ring(depth: f64, width: f64) -> i64 {
    (depth / width).floor() as i64
}

/// Clusters are the connected pieces of the rings
/// `[iΔ/2, (i+1)Δ/2)` around the root. Each cluster's center is its vertex
/// closest to the root.
pub fn tree_scattering_partition(t: &RootedTree, delta: f64) -> Partition {
    let n = t.n();
    let width = delta / 2.0;
    let mut label = vec![usize::MAX; n];
    let mut centers = Vec::new();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &v in &t.order {
        let joined = t.parent[v].filter(|&p| ring(t.depth[p], width) == ring(t.depth[v], width));
        let c = match joined {
            Some(p) => label[p],
            None => {
                centers.push(v);
                clusters.push(Vec::new());
                clusters.len() - 1
            }
        };
        label[v] = c;
        clusters[c].push(v);
    }
    Partition::from_clusters(n, clusters, Some(centers), delta).expect("rings partition the tree")
}

/// Rings of width `Δ/4`; two vertices of ring `i` share a cluster when they
/// have a common ancestor in ring `i-1` or ring `i`.
pub fn tree_weak_partition(t: &RootedTree, delta: f64) -> Partition {
    let n = t.n();
    let width = delta / 4.0;
    // top[v]: highest ancestor of v (v included) lying in ring(v) - 1 or ring(v).
    let mut top = vec![0usize; n];
    for &v in &t.order {
        let rv = ring(t.depth[v], width);
        let mut cur = v;
        while let Some(p) = t.parent[cur] {
            if ring(t.depth[p], width) >= rv - 1 {
                cur = p;
            } else {
                break;
            }
        }
        top[v] = cur;
    }
    // Vertices of one ring with the same top share a cluster.
    let key: Vec<(usize, i64)> = (0..n).map(|v| (top[v], ring(t.depth[v], width))).collect();
    let mut ids = std::collections::HashMap::new();
    let lab: Vec<usize> = key
        .iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(*k).or_insert(next)
        })
        .collect();
    Partition::from_labels(&lab, delta)
}
