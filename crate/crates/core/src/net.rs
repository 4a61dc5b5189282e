//! Greedy nets.

use crate::graph::{WeightedGraph, EPS};
use crate::metric::shortest_paths_within;

/// Greedy net in increasing id order: net points are pairwise more than
/// `spacing` apart and every vertex lies within `spacing` of a net point.
pub fn greedy_net(g: &WeightedGraph, spacing: f64) -> Vec<usize> {
    let mut covered = vec![false; g.n()];
    let mut net = Vec::new();
    for v in 0..g.n() {
        if covered[v] {
            continue;
        }
        net.push(v);
        let dm = shortest_paths_within(g, v, spacing);
        for (u, &d) in dm.dist.iter().enumerate() {
            if d <= spacing + EPS {
                covered[u] = true;
            }
        }
    }
    net
}

/// Greedy net of a vertex sequence under an arbitrary distance, scanning in
/// sequence order. A vertex is kept when it is more than `spacing` from
/// every vertex kept so far.
pub fn sequence_net(seq: &[usize], spacing: f64, dist: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let mut net: Vec<usize> = Vec::new();
    for &v in seq {
        if net.iter().all(|&t| dist(t, v) > spacing + EPS) {
            net.push(v);
        }
    }
    net
}

/// Greedy net along a path using distance measured along the path.
pub fn path_net(g: &WeightedGraph, path: &[usize], spacing: f64) -> Vec<usize> {
    let mut net = Vec::new();
    let mut since = f64::INFINITY;
    for (i, &v) in path.iter().enumerate() {
        if i > 0 {
            since += g.weight(path[i - 1], v).expect("consecutive path vertices are adjacent");
        }
        if since > spacing + EPS {
            net.push(v);
            since = 0.0;
        }
    }
    net
}
