//! Deterministic graph generators. Every random generator takes a seed.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::WeightedGraph;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(n: usize, edges: Vec<(usize, usize, f64)>) -> WeightedGraph {
    WeightedGraph::new(n, edges).expect("generator produces a simple graph")
}

/// Applies a random relabeling so that structure does not follow id order.
fn shuffle_ids(n: usize, edges: Vec<(usize, usize, f64)>, r: &mut ChaCha8Rng) -> WeightedGraph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    build(n, edges.into_iter().map(|(u, v, w)| (perm[u], perm[v], w)).collect())
}

/// Unit-weight path `0 - 1 - .. - (n-1)`.
pub fn path(n: usize) -> WeightedGraph {
    build(n, (1..n).map(|v| (v - 1, v, 1.0)).collect())
}

/// Unit-weight cycle on `n >= 3` vertices.
pub fn cycle(n: usize) -> WeightedGraph {
    build(n, (0..n).map(|v| (v, (v + 1) % n, 1.0)).collect())
}

/// Star with center 0 and `leaves` unit edges.
pub fn star(leaves: usize) -> WeightedGraph {
    build(leaves + 1, (1..=leaves).map(|v| (0, v, 1.0)).collect())
}

/// `w × h` unit grid; vertex `(x, y)` has id `y * w + x`.
pub fn grid(w: usize, h: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                edges.push((v, v + 1, 1.0));
            }
            if y + 1 < h {
                edges.push((v, v + w, 1.0));
            }
        }
    }
    build(w * h, edges)
}

/// `d`-dimensional unit hypercube.
pub fn hypercube(d: usize) -> WeightedGraph {
    let n = 1usize << d;
    let mut edges = Vec::new();
    for v in 0..n {
        for b in 0..d {
            let u = v ^ (1 << b);
            if v < u {
                edges.push((v, u, 1.0));
            }
        }
    }
    build(n, edges)
}

/// Tree where the root has `d + 1` children, every other internal vertex has
/// `d` children, and all leaves are at depth `depth`. Ids follow BFS order.
pub fn full_ary_tree(d: usize, depth: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut next_id = 1;
    for lvl in 0..depth {
        let kids = if lvl == 0 { d + 1 } else { d };
        let mut next = Vec::new();
        for &p in &level {
            for _ in 0..kids {
                edges.push((p, next_id, 1.0));
                next.push(next_id);
                next_id += 1;
            }
        }
        level = next;
    }
    build(next_id, edges)
}

/// Vertex count of [`full_ary_tree`].
pub fn full_ary_tree_size(d: usize, depth: usize) -> usize {
    1 + (d + 1) * (0..depth).map(|i| d.pow(i as u32)).sum::<usize>()
}

/// Complete binary tree with `2^(depth+1) - 1` vertices in heap order.
pub fn full_binary_tree(depth: usize) -> WeightedGraph {
    let n = (1usize << (depth + 1)) - 1;
    build(n, (1..n).map(|v| ((v - 1) / 2, v, 1.0)).collect())
}

/// Random recursive tree with integer weights in `1..=max_weight`.
pub fn random_tree(n: usize, max_weight: u32, seed: u64) -> WeightedGraph {
    let mut r = rng(seed);
    let edges = (1..n)
        .map(|v| (r.random_range(0..v), v, r.random_range(1..=max_weight) as f64))
        .collect();
    shuffle_ids(n, edges, &mut r)
}

/// Erdős–Rényi graph with unit weights, redrawn until connected.
pub fn random_connected_gnp(n: usize, p: f64, seed: u64) -> WeightedGraph {
    let mut r = rng(seed);
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if r.random_bool(p) {
                    edges.push((u, v, 1.0));
                }
            }
        }
        let g = build(n, edges);
        if g.is_connected() {
            return g;
        }
    }
}

/// Random `k`-tree on `n` vertices with unit weights: a `(k+1)`-clique grown
/// by attaching each new vertex to a random existing `k`-clique.
pub fn random_ktree(n: usize, k: usize, seed: u64) -> WeightedGraph {
    let mut r = rng(seed);
    let base = n.min(k + 1);
    let mut edges = Vec::new();
    for u in 0..base {
        for v in u + 1..base {
            edges.push((u, v, 1.0));
        }
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    if base == k + 1 {
        for skip in 0..base {
            cliques.push((0..base).filter(|&x| x != skip).collect());
        }
    }
    for v in base..n {
        let q = cliques[r.random_range(0..cliques.len())].clone();
        for &u in &q {
            edges.push((u, v, 1.0));
        }
        for skip in 0..q.len() {
            let mut c: Vec<usize> = q.iter().copied().filter(|&x| x != q[skip]).collect();
            c.push(v);
            cliques.push(c);
        }
    }
    shuffle_ids(n, edges, &mut r)
}

/// Random cactus with integer weights in `1..=max_weight`, grown by hanging
/// pendant paths and cycles of length 3 to 7 off random vertices.
pub fn random_cactus(n: usize, max_weight: u32, seed: u64) -> WeightedGraph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    let mut count = 1;
    while count < n {
        let at = r.random_range(0..count);
        let left = n - count;
        if r.random_bool(0.5) || left < 2 {
            let len = r.random_range(1..=3usize).min(left);
            let mut prev = at;
            for _ in 0..len {
                edges.push((prev, count, r.random_range(1..=max_weight) as f64));
                prev = count;
                count += 1;
            }
        } else {
            let len = r.random_range(3..=7usize).min(left + 1);
            let mut prev = at;
            for _ in 0..len - 1 {
                edges.push((prev, count, r.random_range(1..=max_weight) as f64));
                prev = count;
                count += 1;
            }
            edges.push((prev, at, r.random_range(1..=max_weight) as f64));
        }
    }
    shuffle_ids(n, edges, &mut r)
}

/// Random planar graph: a greedy triangulation of uniform points in the
/// unit square, with Euclidean edge lengths.
pub fn random_planar(n: usize, seed: u64) -> WeightedGraph {
    let mut r = rng(seed);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (r.random::<f64>(), r.random::<f64>())).collect();
    let len = |a: usize, b: usize| ((pts[a].0 - pts[b].0).powi(2) + (pts[a].1 - pts[b].1).powi(2)).sqrt();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.sort_by(|&(a, b), &(c, d)| len(a, b).total_cmp(&len(c, d)));
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for (a, b) in pairs {
        if chosen.iter().all(|&(c, d)| !segments_cross(pts[a], pts[b], pts[c], pts[d], a == c || a == d || b == c || b == d)) {
            chosen.push((a, b));
        }
    }
    build(n, chosen.into_iter().map(|(a, b)| (a, b, len(a, b))).collect())
}

fn segments_cross(p1: (f64, f64), p2: (f64, f64), p3: (f64, f64), p4: (f64, f64), share: bool) -> bool {
    if share {
        return false;
    }
    let orient = |a: (f64, f64), b: (f64, f64), c: (f64, f64)| (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    let d1 = orient(p3, p4, p1);
    let d2 = orient(p3, p4, p2);
    let d3 = orient(p1, p2, p3);
    let d4 = orient(p1, p2, p4);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0)
}

/// Random `deg`-regular graph from the configuration model, redrawn until
/// simple and connected.
pub fn random_regular(n: usize, deg: usize, seed: u64) -> WeightedGraph {
    assert!((n * deg).is_multiple_of(2) && deg < n, "no {deg}-regular graph on {n} vertices");
    let mut r = rng(seed);
    loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, deg)).collect();
        stubs.shuffle(&mut r);
        let mut set = BTreeSet::new();
        let ok = stubs.chunks(2).all(|c| c[0] != c[1] && set.insert((c[0].min(c[1]), c[0].max(c[1]))));
        if ok {
            let g = build(n, set.into_iter().map(|(a, b)| (a, b, 1.0)).collect());
            if g.is_connected() {
                return g;
            }
        }
    }
}

/// Random subset of `k` distinct vertices, sorted.
pub fn random_terminals(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut r = rng(seed);
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(&mut r);
    let mut t: Vec<usize> = all.into_iter().take(k).collect();
    t.sort_unstable();
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_ary_sizes() {
        assert_eq!(full_ary_tree(1, 3).n(), 7);
        assert_eq!(full_ary_tree(2, 2).n(), 10);
        for (d, depth) in [(2, 3), (3, 2), (1, 5), (4, 1)] {
            let n = full_ary_tree(d, depth).n();
            assert_eq!(n, full_ary_tree_size(d, depth));
            if d > 1 {
                assert_eq!(n, 1 + (d + 1) * (d.pow(depth as u32) - 1) / (d - 1));
            }
        }
        assert_eq!(full_binary_tree(7).n(), 255);
    }

    #[test]
    fn shapes() {
        assert_eq!(hypercube(4).m(), 32);
        assert_eq!(grid(4, 3).m(), 17);
        let t = random_tree(50, 5, 1);
        assert_eq!(t.m(), 49);
        assert!(t.is_connected());
        let k = random_ktree(20, 3, 2);
        assert_eq!(k.m(), 6 + 3 * 16);
        let p = random_planar(40, 3);
        assert!(p.is_connected());
        assert!(p.m() <= 3 * 40 - 6);
        let r = random_regular(20, 3, 4);
        assert!((0..20).all(|v| r.degree(v) == 3));
        let c = random_cactus(60, 3, 5);
        assert_eq!(c.n(), 60);
        assert!(c.is_connected());
    }

    #[test]
    fn seeds_are_deterministic() {
        assert_eq!(random_cactus(40, 4, 9), random_cactus(40, 4, 9));
        assert_eq!(random_connected_gnp(30, 0.2, 9), random_connected_gnp(30, 0.2, 9));
        assert_ne!(random_tree(30, 4, 1), random_tree(30, 4, 2));
    }
}
