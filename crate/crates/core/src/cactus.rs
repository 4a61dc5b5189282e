//! Cactus graphs: recognition, ear composition and a strong-diameter
//! scattering partition.

use crate::error::{Error, Result};
use crate::graph::{WeightedGraph, EPS};
use crate::partition::Partition;

/// How a path is glued onto the graph built so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachKind {
    /// One edge from the attachment vertex to the first path vertex.
    OneEdge,
    /// Edges from the attachment vertex to both path ends, closing a cycle.
    TwoEdge,
}

/// A path glued onto an existing vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Attachment {
    pub at: usize,
    pub path: Vec<usize>,
    pub kind: AttachKind,
}

/// Sequence of attachments that rebuilds a cactus from its root.
#[derive(Debug, Clone, PartialEq)]
pub struct CactusComposition {
    pub root: usize,
    pub attachments: Vec<Attachment>,
}

impl CactusComposition {
    /// Rebuilds the graph using the weights of `g`.
    pub fn replay(&self, g: &WeightedGraph) -> Result<WeightedGraph> {
        let w = |a: usize, b: usize| g.weight(a, b).ok_or(Error::InvalidEdge { u: a, v: b, reason: "missing".into() });
        let mut edges = Vec::new();
        for a in &self.attachments {
            let p = &a.path;
            edges.push((a.at, p[0], w(a.at, p[0])?));
            for i in 1..p.len() {
                edges.push((p[i - 1], p[i], w(p[i - 1], p[i])?));
            }
            if a.kind == AttachKind::TwoEdge {
                let last = *p.last().expect("non-empty path");
                edges.push((last, a.at, w(last, a.at)?));
            }
        }
        WeightedGraph::new(g.n(), edges)
    }
}

/// Blocks (biconnected components) as edge lists.
fn blocks(g: &WeightedGraph) -> Vec<Vec<(usize, usize)>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut out = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    for s in 0..n {
        if disc[s] != usize::MAX {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        // Frames: (vertex, parent, next neighbor index).
        let mut frames: Vec<(usize, usize, usize)> = vec![(s, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut idx)) = frames.last_mut() {
            if *idx < g.degree(v) {
                let u = g.neighbors(v)[*idx].0;
                *idx += 1;
                if disc[u] == usize::MAX {
                    edge_stack.push((v, u));
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    frames.push((u, v, 0));
                } else if u != parent && disc[u] < disc[v] {
                    edge_stack.push((v, u));
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                frames.pop();
                if let Some(&(p, _, _)) = frames.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == (p, v) {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// True when every edge lies on at most one simple cycle.
pub fn is_cactus(g: &WeightedGraph) -> bool {
    g.is_connected() && check_blocks(g).is_ok()
}

fn check_blocks(g: &WeightedGraph) -> Result<Vec<Vec<(usize, usize)>>> {
    let bs = blocks(g);
    for b in &bs {
        let mut vs: Vec<usize> = b.iter().flat_map(|&(a, c)| [a, c]).collect();
        vs.sort_unstable();
        vs.dedup();
        if b.len() > 1 && b.len() != vs.len() {
            return Err(Error::NotCactus(b[0].0.min(b[0].1), b[0].0.max(b[0].1)));
        }
    }
    Ok(bs)
}

/// Decomposes a connected cactus into attachments starting from vertex 0.
/// Bridges become one-edge attachments of a single vertex; cycles become
/// two-edge attachments of the cycle minus its attachment vertex, walked
/// from the smaller-id neighbor of that vertex.
pub fn cactus_composition(g: &WeightedGraph) -> Result<CactusComposition> {
    g.require_connected()?;
    if g.n() == 0 {
        return Err(Error::EmptySet);
    }
    let bs = check_blocks(g)?;
    let n = g.n();
    let mut blocks_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    let block_vertices: Vec<Vec<usize>> = bs
        .iter()
        .map(|b| {
            let mut vs: Vec<usize> = b.iter().flat_map(|&(a, c)| [a, c]).collect();
            vs.sort_unstable();
            vs.dedup();
            vs
        })
        .collect();
    for (i, vs) in block_vertices.iter().enumerate() {
        for &v in vs {
            blocks_at[v].push(i);
        }
    }
    let mut used = vec![false; bs.len()];
    let root = 0;
    let mut queue = vec![root];
    let mut head = 0;
    let mut attachments = Vec::new();
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for &bi in &blocks_at[u] {
            if used[bi] {
                continue;
            }
            used[bi] = true;
            let vs = &block_vertices[bi];
            let att = if vs.len() == 2 {
                let x = if vs[0] == u { vs[1] } else { vs[0] };
                Attachment { at: u, path: vec![x], kind: AttachKind::OneEdge }
            } else {
                let in_block = |x: usize| vs.binary_search(&x).is_ok();
                let start = g.neighbors(u).iter().map(|&(x, _)| x).find(|&x| in_block(x)).expect("cycle through u");
                let mut path = vec![start];
                let mut prev = u;
                let mut cur = start;
                loop {
                    let next = g
                        .neighbors(cur)
                        .iter()
                        .map(|&(x, _)| x)
                        .find(|&x| x != prev && in_block(x))
                        .expect("cycle continues");
                    if next == u {
                        break;
                    }
                    path.push(next);
                    prev = cur;
                    cur = next;
                }
                Attachment { at: u, path, kind: AttachKind::TwoEdge }
            };
            queue.extend(att.path.iter().copied());
            attachments.push(att);
        }
    }
    Ok(CactusComposition { root, attachments })
}

/// Partition with the (one- or two-point) center set of each cluster.
#[derive(Debug, Clone)]
pub struct CactusPartition {
    pub partition: Partition,
    pub center_sets: Vec<Vec<usize>>,
    /// Distance inside the cluster from each vertex to its center set.
    pub labels: Vec<f64>,
    pub radius: f64,
}

struct Builder {
    cluster: Vec<usize>,
    label: Vec<f64>,
    centers: Vec<Vec<usize>>,
}

impl Builder {
    fn open(&mut self, set: Vec<usize>) -> usize {
        self.centers.push(set);
        self.centers.len() - 1
    }

    fn put(&mut self, v: usize, c: usize, label: f64) {
        self.cluster[v] = c;
        self.label[v] = label;
    }
}

/// Strong-diameter scattering partition of a connected cactus. Each
/// cluster lies within `r = Δ/4` (measured inside the cluster) of a center
/// set of one or two vertices at distance at most `2r` apart, so strong
/// diameters are at most `Δ`.
pub fn cactus_scattering(g: &WeightedGraph, delta: f64) -> Result<CactusPartition> {
    let comp = cactus_composition(g)?;
    let n = g.n();
    let r = delta / 4.0;
    let mut b = Builder { cluster: vec![usize::MAX; n], label: vec![0.0; n], centers: Vec::new() };
    let c0 = b.open(vec![comp.root]);
    b.put(comp.root, c0, 0.0);
    let w = |a: usize, c: usize| g.weight(a, c).expect("attachment edges exist");
    for att in &comp.attachments {
        let p = &att.path;
        let u = att.at;
        match att.kind {
            AttachKind::OneEdge => {
                let mut prev = u;
                for &v in p {
                    let cand = b.label[prev] + w(prev, v);
                    if cand <= r + EPS {
                        b.put(v, b.cluster[prev], cand);
                    } else {
                        let c = b.open(vec![v]);
                        b.put(v, c, 0.0);
                    }
                    prev = v;
                }
            }
            AttachKind::TwoEdge => {
                let m = p.len();
                // prefix[l]: length along the path from p[0] to p[l].
                let mut prefix = vec![0.0; m];
                for l in 1..m {
                    prefix[l] = prefix[l - 1] + w(p[l - 1], p[l]);
                }
                let arc = |a: usize, c: usize| (prefix[c] - prefix[a]).abs();
                let total = prefix[m - 1];
                let via_first: Vec<f64> = (0..m).map(|l| b.label[u] + w(u, p[0]) + prefix[l]).collect();
                let via_last: Vec<f64> = (0..m).map(|l| b.label[u] + w(u, p[m - 1]) + total - prefix[l]).collect();
                let cu = b.cluster[u];
                let first_far = (0..m).find(|&l| via_first[l] > r + EPS);
                let last_far = (0..m).rev().find(|&l| via_last[l] > r + EPS);
                let (lo, hi) = match (first_far, last_far) {
                    (Some(lo), Some(hi)) if lo <= hi => (lo, hi),
                    _ => {
                        for l in 0..m {
                            b.put(p[l], cu, via_first[l].min(via_last[l]));
                        }
                        continue;
                    }
                };
                for l in (0..lo).chain(hi + 1..m) {
                    b.put(p[l], cu, via_first[l].min(via_last[l]));
                }
                let (mut a, mut z) = (lo, hi);
                loop {
                    if arc(a, z) <= 2.0 * r + EPS {
                        let set = if a == z { vec![p[a]] } else { vec![p[a], p[z]] };
                        let c = b.open(set);
                        for l in a..=z {
                            b.put(p[l], c, arc(a, l).min(arc(l, z)));
                        }
                        break;
                    }
                    let ca = b.open(vec![p[a]]);
                    let mut l = a;
                    while l <= z && arc(a, l) <= r + EPS {
                        b.put(p[l], ca, arc(a, l));
                        l += 1;
                    }
                    let cz = b.open(vec![p[z]]);
                    let mut k = z;
                    while k >= l && arc(k, z) <= r + EPS {
                        b.put(p[k], cz, arc(k, z));
                        k -= 1;
                    }
                    if l > k {
                        break;
                    }
                    a = l;
                    z = k;
                }
            }
        }
    }
    let k = b.centers.len();
    let mut clusters = vec![Vec::new(); k];
    for v in 0..n {
        clusters[b.cluster[v]].push(v);
    }
    let centers = b.centers.iter().map(|s| s[0]).collect();
    let partition = Partition::from_clusters(n, clusters, Some(centers), delta)?;
    Ok(CactusPartition { partition, center_sets: b.centers, labels: b.label, radius: r })
}

/// [`cactus_scattering`] returning only the partition.
pub fn cactus_scattering_partition(g: &WeightedGraph, delta: f64) -> Result<Partition> {
    Ok(cactus_scattering(g, delta)?.partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::metric::strong_diameter;
    use crate::verify::{PathMode, Verifier};

    #[test]
    fn five_cycle_is_one_two_edge_attachment() {
        let g = gen::cycle(5);
        let c = cactus_composition(&g).unwrap();
        assert_eq!(c.attachments, vec![Attachment { at: 0, path: vec![1, 2, 3, 4], kind: AttachKind::TwoEdge }]);
        assert_eq!(c.replay(&g).unwrap().m(), 5);
    }

    #[test]
    fn trees_use_one_edge_attachments() {
        let g = gen::random_tree(30, 3, 4);
        let c = cactus_composition(&g).unwrap();
        assert!(c.attachments.iter().all(|a| a.kind == AttachKind::OneEdge));
        assert_eq!(c.attachments.len(), 29);
    }

    #[test]
    fn k4_is_not_a_cactus() {
        let g = WeightedGraph::unweighted(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(matches!(cactus_composition(&g), Err(Error::NotCactus(..))));
        // Two cycles sharing the edge {0, 1}.
        let theta = WeightedGraph::unweighted(4, [(0, 1), (1, 2), (2, 0), (1, 3), (3, 0)]).unwrap();
        assert!(!is_cactus(&theta));
    }

    #[test]
    fn long_cycle_gets_paired_centers() {
        let g = gen::cycle(12);
        let cp = cactus_scattering(&g, 4.0).unwrap();
        assert!(cp.labels.iter().all(|&l| l <= 1.0));
        for c in cp.partition.clusters() {
            assert!(strong_diameter(&g, c).unwrap() <= 4.0);
        }
        // Worked by hand: r = 1, the root keeps its two neighbors, then
        // centers grow inward from both ends until one vertex is left.
        assert_eq!(
            cp.partition.clusters(),
            &[vec![0, 1, 11], vec![2, 3], vec![9, 10], vec![4, 5], vec![7, 8], vec![6]]
        );
        assert_eq!(cp.center_sets, vec![vec![0], vec![2], vec![10], vec![4], vec![8], vec![6]]);
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_cacti_meet_targets(seed in 0u64..10_000, n in 1usize..50, delta in 1.0f64..30.0) {
            let g = gen::random_cactus(n, 4, seed);
            let comp = cactus_composition(&g).unwrap();
            prop_assert_eq!(comp.replay(&g).unwrap().m(), g.m());
            let cp = cactus_scattering(&g, delta).unwrap();
            let v = Verifier::new(&g);
            let r = v.verify_scattering(&cp.partition, 4.0, 5, delta, PathMode::all_paths()).unwrap();
            prop_assert!(r.ok, "{:?}", r);
            let s = v.verify_strong_sparse(&cp.partition, 1.0, usize::MAX, delta).unwrap();
            prop_assert!(s.ok, "{:?}", s);
            for (i, set) in cp.center_sets.iter().enumerate() {
                prop_assert!(!cp.partition.clusters()[i].is_empty());
                prop_assert!(set.len() <= 2);
            }
        }
    }
}
