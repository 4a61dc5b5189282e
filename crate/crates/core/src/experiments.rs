//! Measurements on the lower-bound instances: full `d`-ary trees for ball
//! counts and hypercubes for edges separated along random shortest paths.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen;
use crate::graph::WeightedGraph;
use crate::metric::{connected_components, strong_diameter};
use crate::partition::Partition;
use crate::tree::{tree_scattering_partition, tree_weak_partition, RootedTree};
use crate::verify::Verifier;

/// Largest tree accepted by [`exhaustive_tree_lb`].
pub const EXHAUSTIVE_LIMIT: usize = 12;

/// Tree partition used by [`experiment_tree_lb`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TreeLbScheme {
    Scatter,
    Weak,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeLbReport {
    pub d: usize,
    pub depth: usize,
    pub n: usize,
    pub delta: f64,
    pub clusters: usize,
    /// Most clusters met by a radius-1 ball, and its center.
    pub max_ball: usize,
    pub ball_center: usize,
    /// `d + 1`, which any partition with strong diameter below `2·depth`
    /// must reach.
    pub bound: usize,
    pub meets_bound: bool,
    /// The bound only constrains partitions into connected clusters.
    pub connected: bool,
}

/// Runs a tree scheme on the full `d`-ary tree with `Δ = 2·depth - 1` and
/// measures the worst radius-1 ball.
pub fn experiment_tree_lb(d: usize, depth: usize, scheme: TreeLbScheme) -> Result<TreeLbReport> {
    if d == 0 || depth == 0 {
        return Err(Error::InvalidParameter("need d >= 1 and depth >= 1".into()));
    }
    let g = gen::full_ary_tree(d, depth);
    let delta = (2 * depth - 1) as f64;
    let t = RootedTree::new(&g, 0)?;
    let p = match scheme {
        TreeLbScheme::Scatter => tree_scattering_partition(&t, delta),
        TreeLbScheme::Weak => tree_weak_partition(&t, delta),
    };
    let (max_ball, ball_center, _) = Verifier::new(&g).measure_balls(&p, 1.0);
    let connected = p.clusters().iter().all(|c| connected_components(&g, c).len() == 1);
    Ok(TreeLbReport {
        d,
        depth,
        n: g.n(),
        delta,
        clusters: p.len(),
        max_ball,
        ball_center,
        bound: d + 1,
        meets_bound: max_ball > d,
        connected,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustiveReport {
    pub n: usize,
    /// Connected partitions examined (one per set of cut tree edges).
    pub partitions: usize,
    /// Those with strong diameter below `2·depth`.
    pub qualifying: usize,
    /// Smallest worst-ball count among qualifying partitions.
    pub min_max_ball: usize,
    /// Qualifying partitions whose every radius-1 ball meets at most `d`
    /// clusters.
    pub counterexamples: usize,
}

/// Enumerates every connected partition of the full `d`-ary tree, keeps
/// those with strong diameter below `2·depth` and checks that each has a
/// radius-1 ball meeting at least `d + 1` clusters.
pub fn exhaustive_tree_lb(d: usize, depth: usize) -> Result<ExhaustiveReport> {
    let g = gen::full_ary_tree(d, depth);
    let n = g.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::InvalidParameter(format!("{n} vertices exceeds the limit of {EXHAUSTIVE_LIMIT}")));
    }
    let edges = g.edges().to_vec();
    let bound = (2 * depth) as f64;
    let balls: Vec<Vec<usize>> = (0..n)
        .map(|v| std::iter::once(v).chain(g.neighbors(v).iter().map(|&(u, _)| u)).collect())
        .collect();
    let masks = 1usize << edges.len();
    let results: Vec<Option<usize>> = (0..masks)
        .into_par_iter()
        .map(|mask| {
            let kept: Vec<(usize, usize, f64)> = edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask & (1 << i) == 0)
                .map(|(_, e)| (e.u, e.v, e.w))
                .collect();
            let forest = WeightedGraph::new(n, kept).expect("subgraph of a valid tree");
            let all: Vec<usize> = (0..n).collect();
            let parts = connected_components(&forest, &all);
            for c in &parts {
                if strong_diameter(&g, c).expect("valid cluster") >= bound {
                    return None;
                }
            }
            let mut label = vec![0; n];
            for (i, c) in parts.iter().enumerate() {
                for &v in c {
                    label[v] = i;
                }
            }
            let worst = balls
                .iter()
                .map(|b| {
                    let mut ls: Vec<usize> = b.iter().map(|&v| label[v]).collect();
                    ls.sort_unstable();
                    ls.dedup();
                    ls.len()
                })
                .max()
                .unwrap_or(0);
            Some(worst)
        })
        .collect();
    let qualifying: Vec<usize> = results.into_iter().flatten().collect();
    Ok(ExhaustiveReport {
        n,
        partitions: masks,
        qualifying: qualifying.len(),
        min_max_ball: qualifying.iter().copied().min().unwrap_or(0),
        counterexamples: qualifying.iter().filter(|&&k| k <= d).count(),
    })
}

/// Partition of the `d`-cube into subcubes: vertices agreeing on every bit
/// at index `free` or above share a cluster, so each cluster has diameter
/// `free`.
pub fn subcube_partition(d: usize, free: usize) -> Result<Partition> {
    if free > d {
        return Err(Error::InvalidParameter("free bits exceed dimension".into()));
    }
    let labels: Vec<usize> = (0..1usize << d).map(|v| v >> free).collect();
    Ok(Partition::from_labels(&labels, free as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperscReport {
    pub d: usize,
    /// Length of each sampled path.
    pub k: usize,
    pub trials: usize,
    pub max_separated: usize,
    pub mean_separated: f64,
}

/// Samples `trials` random shortest paths of length `k` in the `d`-cube (a
/// random start, then `k` distinct bits flipped in random order) and counts
/// the path edges whose ends lie in different clusters of `p`.
pub fn experiment_supersc_lb(d: usize, k: usize, p: &Partition, trials: usize, seed: u64) -> Result<SuperscReport> {
    if k > d || p.n() != 1usize << d {
        return Err(Error::InvalidParameter("need k <= d and a partition of the d-cube".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let counts: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut v: usize = rng.random_range(0..1usize << d);
            let mut bits: Vec<usize> = (0..d).collect();
            bits.shuffle(&mut rng);
            let mut cut = 0;
            for &b in &bits[..k] {
                let u = v ^ (1 << b);
                if p.cluster_of(u) != p.cluster_of(v) {
                    cut += 1;
                }
                v = u;
            }
            cut
        })
        .collect();
    Ok(SuperscReport {
        d,
        k,
        trials,
        max_separated: counts.iter().copied().max().unwrap_or(0),
        mean_separated: counts.iter().sum::<usize>() as f64 / trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_schemes_hit_the_ball_bound() {
        let r = experiment_tree_lb(3, 3, TreeLbScheme::Scatter).unwrap();
        assert_eq!(r.n, gen::full_ary_tree_size(3, 3));
        assert!(r.connected && r.meets_bound, "{r:?}");
        // Weak clusters may be disconnected and then escape the bound.
        let w = experiment_tree_lb(3, 3, TreeLbScheme::Weak).unwrap();
        assert!(!w.connected);
        assert_eq!(w.max_ball, 3);
        let r = experiment_tree_lb(2, 1, TreeLbScheme::Scatter).unwrap();
        assert_eq!(r.delta, 1.0);
    }

    #[test]
    fn exhaustive_search_on_small_tree() {
        let r = exhaustive_tree_lb(2, 2).unwrap();
        assert_eq!(r.n, 10);
        assert_eq!(r.partitions, 512);
        assert!(r.qualifying > 0);
        assert_eq!(r.counterexamples, 0);
        assert!(r.min_max_ball >= 3);
        assert!(exhaustive_tree_lb(3, 2).is_err());
    }

    #[test]
    fn trivial_hypercube_partitions() {
        let one = Partition::from_labels(&[0; 16], 4.0);
        assert_eq!(experiment_supersc_lb(4, 3, &one, 50, 1).unwrap().max_separated, 0);
        let single = Partition::singletons(16, 0.0);
        let r = experiment_supersc_lb(4, 3, &single, 50, 1).unwrap();
        assert_eq!((r.max_separated, r.mean_separated), (3, 3.0));
    }

    #[test]
    fn subcubes_separate_a_quarter() {
        let p = subcube_partition(8, 2).unwrap();
        assert_eq!(p.len(), 64);
        let r = experiment_supersc_lb(8, 2, &p, 4000, 3).unwrap();
        // Each flip lands in a fixed bit with probability 6/8.
        assert!((r.mean_separated - 1.5).abs() < 0.1, "{r:?}");
        assert!(r.mean_separated >= 0.5);
    }
}
