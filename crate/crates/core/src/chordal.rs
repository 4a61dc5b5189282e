//! Clique trees of chordal graphs and a label-propagation scattering
//! partition for unweighted chordal graphs.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::metric::shortest_paths;
use crate::partition::Partition;

/// Clique tree in which every bag introduces exactly one new vertex.
///
/// The bag of vertex `v` is `{v}` plus the neighbors of `v` visited before
/// it by maximum cardinality search. Its parent bag is the one of the most
/// recently visited of those neighbors.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueTree {
    /// Visit order; `order[0]` is the root vertex with bag `{root}`.
    pub order: Vec<usize>,
    /// Position of each vertex in `order`.
    pub position: Vec<usize>,
    /// Bag introducing each vertex, sorted.
    pub bags: Vec<Vec<usize>>,
    /// Vertex whose bag is the parent of this vertex's bag.
    pub parent: Vec<Option<usize>>,
}

impl CliqueTree {
    pub fn root(&self) -> usize {
        self.order[0]
    }
}

fn require_unit(g: &WeightedGraph) -> Result<()> {
    if let Some(e) = g.edges().iter().find(|e| e.w != 1.0) {
        return Err(Error::NonUnitWeight { u: e.u, v: e.v, weight: e.w });
    }
    Ok(())
}

/// Maximum cardinality search with ties to the smaller id.
fn mcs_order(g: &WeightedGraph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !visited[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("unvisited vertex remains");
        visited[v] = true;
        order.push(v);
        for &(u, _) in g.neighbors(v) {
            if !visited[u] {
                weight[u] += 1;
            }
        }
    }
    order
}

/// Chordless cycle through `z` entering via `x` and leaving via `y`, if
/// `x` and `y` are joined outside the closed neighborhood of `z`.
fn cycle_through(g: &WeightedGraph, z: usize, x: usize, y: usize) -> Option<Vec<usize>> {
    let n = g.n();
    let mut blocked = vec![false; n];
    blocked[z] = true;
    for &(u, _) in g.neighbors(z) {
        blocked[u] = u != x && u != y;
    }
    let mut prev = vec![usize::MAX; n];
    prev[x] = x;
    let mut q = VecDeque::from([x]);
    while let Some(v) = q.pop_front() {
        if v == y {
            let mut cyc = vec![y];
            let mut cur = y;
            while cur != x {
                cur = prev[cur];
                cyc.push(cur);
            }
            cyc.push(z);
            cyc.reverse();
            return Some(cyc);
        }
        for &(u, _) in g.neighbors(v) {
            if !blocked[u] && prev[u] == usize::MAX {
                prev[u] = v;
                q.push_back(u);
            }
        }
    }
    None
}

fn find_chordless_cycle(g: &WeightedGraph, hint: (usize, usize, usize)) -> Vec<usize> {
    if let Some(c) = cycle_through(g, hint.0, hint.1, hint.2) {
        return c;
    }
    for z in 0..g.n() {
        let nb: Vec<usize> = g.neighbors(z).iter().map(|&(u, _)| u).collect();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                if !g.has_edge(x, y) {
                    if let Some(c) = cycle_through(g, z, x, y) {
                        return c;
                    }
                }
            }
        }
    }
    unreachable!("a non-chordal graph has a chordless cycle")
}

/// Clique tree of a connected unweighted chordal graph.
pub fn build_clique_tree(g: &WeightedGraph) -> Result<CliqueTree> {
    require_unit(g)?;
    g.require_connected()?;
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let order = mcs_order(g);
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut bags = vec![Vec::new(); n];
    let mut parent = vec![None; n];
    for &v in &order {
        let earlier: Vec<usize> = g.neighbors(v).iter().map(|&(u, _)| u).filter(|&u| position[u] < position[v]).collect();
        if let Some(&p) = earlier.iter().max_by_key(|&&u| position[u]) {
            if let Some(&w) = earlier.iter().find(|&&w| w != p && !g.has_edge(w, p)) {
                return Err(Error::NotChordal { cycle: find_chordless_cycle(g, (v, p, w)) });
            }
            parent[v] = Some(p);
        }
        let mut bag = earlier;
        bag.push(v);
        bag.sort_unstable();
        bags[v] = bag;
    }
    Ok(CliqueTree { order, position, bags, parent })
}

/// True when `g` (any weights) is chordal.
pub fn is_chordal(g: &WeightedGraph) -> bool {
    let unit = WeightedGraph::unweighted(g.n(), g.edges().iter().map(|e| (e.u, e.v))).expect("same edges");
    crate::metric::connected_components(&unit, &(0..g.n()).collect::<Vec<_>>())
        .into_iter()
        .all(|comp| match crate::metric::induced_subgraph(&unit, &comp) {
            Ok((h, _)) => build_clique_tree(&h).is_ok(),
            Err(_) => true,
        })
}

/// Partition together with the labels that produced it.
#[derive(Debug, Clone)]
pub struct ChordalPartition {
    pub partition: Partition,
    /// Distance from each vertex to its cluster center.
    pub labels: Vec<usize>,
    /// Label threshold used for joining; every label is at most this value.
    pub radius: usize,
    pub tree: CliqueTree,
}

/// Scattering partition of a connected unweighted chordal graph for an
/// integer `Δ`. Vertices are processed in clique-tree order; a vertex joins
/// the cluster of the smallest-label vertex of its bag when that label is
/// below the radius `⌊Δ/2⌋`, and starts its own cluster otherwise.
pub fn chordal_scattering(g: &WeightedGraph, delta: f64) -> Result<ChordalPartition> {
    if delta.fract() != 0.0 || delta < 0.0 {
        return Err(Error::InvalidParameter(format!("Δ = {delta} must be a non-negative integer")));
    }
    let tree = build_clique_tree(g)?;
    let n = g.n();
    let d = delta as usize;
    if d < 3 {
        return Ok(ChordalPartition {
            partition: Partition::singletons(n, delta),
            labels: vec![0; n],
            radius: d / 2,
            tree,
        });
    }
    let radius = d / 2;
    let mut pi = vec![usize::MAX; n];
    let mut label = vec![usize::MAX; n];
    let mut center_dist: HashMap<usize, Vec<f64>> = HashMap::new();
    for &v in &tree.order {
        let best = tree.bags[v]
            .iter()
            .copied()
            .filter(|&u| u != v)
            .min_by(|&a, &b| label[a].cmp(&label[b]).then(a.cmp(&b)));
        match best {
            Some(u) if label[u] < radius => {
                let c = pi[u];
                pi[v] = c;
                label[v] = center_dist[&c][v] as usize;
            }
            _ => {
                pi[v] = v;
                label[v] = 0;
                center_dist.insert(v, shortest_paths(g, v).dist);
            }
        }
    }
    let mut centers: Vec<usize> = tree.order.iter().copied().filter(|&v| pi[v] == v).collect();
    let index: HashMap<usize, usize> = centers.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut clusters = vec![Vec::new(); centers.len()];
    for v in 0..n {
        clusters[index[&pi[v]]].push(v);
    }
    let partition = Partition::from_clusters(n, clusters, Some(std::mem::take(&mut centers)), delta)?;
    Ok(ChordalPartition { partition, labels: label, radius, tree })
}

/// [`chordal_scattering`] returning only the partition.
pub fn chordal_scattering_partition(g: &WeightedGraph, delta: f64) -> Result<Partition> {
    Ok(chordal_scattering(g, delta)?.partition)
}

/// Checks that within every bag, all vertices with label below the radius
/// share a cluster.
pub fn bag_invariant_holds(cp: &ChordalPartition) -> bool {
    cp.tree.bags.iter().all(|bag| {
        let mut low = bag.iter().filter(|&&u| cp.labels[u] < cp.radius).map(|&u| cp.partition.cluster_of(u));
        match low.next() {
            Some(c) => low.all(|x| x == c),
            None => true,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::verify::{PathMode, Verifier};

    #[test]
    fn triangle_bags() {
        let g = WeightedGraph::unweighted(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = build_clique_tree(&g).unwrap();
        assert_eq!(t.order, vec![0, 1, 2]);
        assert_eq!(t.bags, vec![vec![0], vec![0, 1], vec![0, 1, 2]]);
        assert_eq!(t.parent, vec![None, Some(0), Some(1)]);
    }

    #[test]
    fn four_cycle_is_rejected_with_a_witness() {
        let g = gen::cycle(4);
        match build_clique_tree(&g) {
            Err(Error::NotChordal { cycle }) => {
                assert_eq!(cycle.len(), 4);
                for i in 0..4 {
                    assert!(g.has_edge(cycle[i], cycle[(i + 1) % 4]));
                }
                assert!(!g.has_edge(cycle[0], cycle[2]));
                assert!(!g.has_edge(cycle[1], cycle[3]));
            }
            other => panic!("expected NotChordal, got {other:?}"),
        }
        assert!(!is_chordal(&gen::cycle(6)));
        assert!(is_chordal(&gen::random_ktree(30, 3, 1)));
    }

    #[test]
    fn weighted_input_is_rejected() {
        let g = WeightedGraph::new(2, [(0, 1, 2.0)]).unwrap();
        assert!(matches!(chordal_scattering(&g, 4.0), Err(Error::NonUnitWeight { .. })));
    }

    #[test]
    fn small_delta_gives_singletons() {
        let g = gen::random_ktree(12, 2, 0);
        for d in [0.0, 1.0, 2.0] {
            assert_eq!(chordal_scattering_partition(&g, d).unwrap().len(), 12);
        }
    }

    #[test]
    fn unit_path_clusters() {
        // Radius 2 on a path: labels 0, 1, 2, then a new center.
        let g = gen::path(7);
        let cp = chordal_scattering(&g, 4.0).unwrap();
        assert_eq!(cp.partition.clusters(), &[vec![0, 1, 2], vec![3, 4, 5], vec![6]]);
        assert_eq!(cp.labels, vec![0, 1, 2, 0, 1, 2, 0]);
    }

    #[test]
    fn odd_delta_respects_the_diameter() {
        // A spider with long legs would reach diameter Δ + 1 if the radius
        // were Δ/2 rather than ⌊Δ/2⌋.
        let mut edges = Vec::new();
        for leg in 0..3 {
            let mut prev = 0;
            for k in 0..4 {
                let v = 1 + leg * 4 + k;
                edges.push((prev, v));
                prev = v;
            }
        }
        let g = WeightedGraph::unweighted(13, edges).unwrap();
        let p = chordal_scattering_partition(&g, 3.0).unwrap();
        let v = Verifier::new(&g);
        assert!(v.verify_scattering(&p, 2.0, 3, 3.0, PathMode::all_paths()).unwrap().ok);
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn ktrees_meet_targets(seed in 0u64..10_000, n in 1usize..40, k in 1usize..5, delta in 0u32..11) {
            let g = gen::random_ktree(n, k, seed);
            let t = build_clique_tree(&g).unwrap();
            // Tree decomposition: edges covered, occurrences connected.
            for e in g.edges() {
                prop_assert!(t.bags.iter().any(|b| b.contains(&e.u) && b.contains(&e.v)));
            }
            for x in 0..n {
                let holders: Vec<usize> = (0..n).filter(|&v| t.bags[v].contains(&x)).collect();
                let tops = holders.iter().filter(|&&v| t.parent[v].is_none_or(|p| !t.bags[p].contains(&x))).count();
                prop_assert_eq!(tops, 1);
            }
            let cp = chordal_scattering(&g, delta as f64).unwrap();
            prop_assert!(cp.labels.iter().all(|&l| l <= cp.radius));
            if delta >= 3 {
                prop_assert!(bag_invariant_holds(&cp));
            }
            let v = Verifier::new(&g);
            let r = v.verify_scattering(&cp.partition, 2.0, 3, delta as f64, PathMode::all_paths()).unwrap();
            prop_assert!(r.ok, "{:?}", r);
        }
    }
}
