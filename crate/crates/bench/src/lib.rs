//! Fixed instances shared by the benchmarks.

use scatterkit::{gen, WeightedGraph};

/// Named benchmark graphs, smallest first.
pub fn tree_instances() -> Vec<(String, WeightedGraph)> {
    [100, 300, 1000].into_iter().map(|n| (format!("tree{n}"), gen::random_tree(n, 4, n as u64))).collect()
}

pub fn general_instances() -> Vec<(String, WeightedGraph)> {
    [64, 256].into_iter().map(|n| (format!("gnp{n}"), gen::random_connected_gnp(n, 8.0 / n as f64, n as u64))).collect()
}
