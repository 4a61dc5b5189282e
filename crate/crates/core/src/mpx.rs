//! Shifted-distance clustering: every vertex joins the center maximizing
//! `δ_t - d(t, v)`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{WeightedGraph, EPS};
use crate::metric::{ball, canonical_shortest_path, shortest_paths};
use crate::partition::Partition;

/// Centers with their shifts and a priority order for breaking ties.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftAssignment {
    pub centers: Vec<usize>,
    pub shifts: Vec<f64>,
    /// `rank[i]` is the tie-break priority of `centers[i]`; lower wins.
    pub rank: Vec<usize>,
}

impl ShiftAssignment {
    /// Ties are broken toward the smaller center id.
    pub fn new(centers: Vec<usize>, shifts: Vec<f64>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::NoCenters);
        }
        if centers.len() != shifts.len() {
            return Err(Error::InvalidParameter("one shift per center expected".into()));
        }
        if let Some(&s) = shifts.iter().find(|s| !s.is_finite() || **s < 0.0) {
            return Err(Error::InvalidParameter(format!("shift {s} must be finite and non-negative")));
        }
        let mut order: Vec<usize> = (0..centers.len()).collect();
        order.sort_by_key(|&i| centers[i]);
        let mut rank = vec![0; centers.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        Ok(ShiftAssignment { centers, shifts, rank })
    }

    /// Uses `priority` (a permutation of the center ids) for tie breaks.
    pub fn with_priority(mut self, priority: &[usize]) -> Result<Self> {
        if priority.len() != self.centers.len() {
            return Err(Error::InvalidParameter("priority must list every center once".into()));
        }
        for (r, &c) in priority.iter().enumerate() {
            let i = self
                .centers
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| Error::InvalidParameter(format!("{c} is not a center")))?;
            self.rank[i] = r;
        }
        Ok(self)
    }

    /// Parses lines `center shift`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut centers = Vec::new();
        let mut shifts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse { line: i + 1, message: "expected `center shift`".into() };
            if parts.len() != 2 {
                return Err(bad());
            }
            centers.push(parts[0].parse().map_err(|_| bad())?);
            shifts.push(parts[1].parse().map_err(|_| bad())?);
        }
        ShiftAssignment::new(centers, shifts)
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        for (c, s) in self.centers.iter().zip(&self.shifts) {
            let _ = writeln!(out, "{c} {s}");
        }
        out
    }

    fn check(&self, g: &WeightedGraph) -> Result<()> {
        for &c in &self.centers {
            g.check_vertex(c)?;
        }
        Ok(())
    }
}

/// Distances from every center to every vertex.
pub fn center_distances(g: &WeightedGraph, centers: &[usize]) -> Vec<Vec<f64>> {
    centers.par_iter().map(|&c| shortest_paths(g, c).dist).collect()
}

/// Index (into `centers`) of the center each vertex joins.
pub fn mpx_owners(shifts: &ShiftAssignment, dist: &[Vec<f64>]) -> Result<Vec<usize>> {
    let n = dist.first().map_or(0, |d| d.len());
    let k = shifts.centers.len();
    let mut by_rank: Vec<usize> = (0..k).collect();
    by_rank.sort_by_key(|&i| shifts.rank[i]);
    let mut owner = Vec::with_capacity(n);
    for v in 0..n {
        let best = (0..k).map(|i| shifts.shifts[i] - dist[i][v]).fold(f64::NEG_INFINITY, f64::max);
        if best == f64::NEG_INFINITY {
            return Err(Error::DisconnectedGraph);
        }
        let i = by_rank
            .iter()
            .copied()
            .find(|&i| shifts.shifts[i] - dist[i][v] >= best - EPS)
            .expect("the maximizer qualifies");
        owner.push(i);
    }
    Ok(owner)
}

/// Clusters from precomputed center distances. Empty clusters are dropped;
/// the rest are listed in tie-break order with their centers.
pub fn mpx_cluster_with(shifts: &ShiftAssignment, dist: &[Vec<f64>], delta: f64) -> Result<Partition> {
    let owner = mpx_owners(shifts, dist)?;
    let k = shifts.centers.len();
    let mut members = vec![Vec::new(); k];
    for (v, &i) in owner.iter().enumerate() {
        members[i].push(v);
    }
    let mut by_rank: Vec<usize> = (0..k).collect();
    by_rank.sort_by_key(|&i| shifts.rank[i]);
    let mut clusters = Vec::new();
    let mut centers = Vec::new();
    for i in by_rank {
        if !members[i].is_empty() {
            clusters.push(std::mem::take(&mut members[i]));
            centers.push(shifts.centers[i]);
        }
    }
    Partition::from_clusters(owner.len(), clusters, Some(centers), delta)
}

/// Runs the clustering on `g`. The partition's `delta` is the largest shift
/// times two, a bound on every cluster's diameter.
pub fn mpx_cluster(g: &WeightedGraph, shifts: &ShiftAssignment) -> Result<Partition> {
    shifts.check(g)?;
    let dist = center_distances(g, &shifts.centers);
    let max_shift = shifts.shifts.iter().copied().fold(0.0, f64::max);
    mpx_cluster_with(shifts, &dist, 2.0 * max_shift)
}

/// Checks that the canonical shortest path from each vertex to its center
/// stays inside the vertex's cluster. Returns the first offending
/// `(vertex, path vertex)` pair, if any.
pub fn check_mpx_path_property(g: &WeightedGraph, p: &Partition) -> Result<Option<(usize, usize)>> {
    let centers = p.centers().ok_or_else(|| Error::InvalidParameter("partition has no centers".into()))?;
    for (ci, cluster) in p.clusters().iter().enumerate() {
        let t = centers[ci];
        for &v in cluster {
            let path = canonical_shortest_path(g, v, t)?;
            if let Some(&u) = path.vertices.iter().find(|&&u| p.cluster_of(u) != ci) {
                return Ok(Some((v, u)));
            }
        }
    }
    Ok(None)
}

/// Checks that no cluster whose center `t` has `f_v(best) - f_v(t) > 2r`
/// meets the ball `B(v, r)`.
pub fn check_mpx_intersection_property(
    g: &WeightedGraph,
    shifts: &ShiftAssignment,
    p: &Partition,
    v: usize,
    r: f64,
) -> Result<bool> {
    shifts.check(g)?;
    let dv = shortest_paths(g, v).dist;
    let f: Vec<f64> = shifts.centers.iter().zip(&shifts.shifts).map(|(&t, &s)| s - dv[t]).collect();
    let best = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let centers = p.centers().ok_or_else(|| Error::InvalidParameter("partition has no centers".into()))?;
    let b = ball(g, v, r);
    for (i, &t) in shifts.centers.iter().enumerate() {
        if best - f[i] > 2.0 * r + EPS {
            if let Some(ci) = centers.iter().position(|&c| c == t) {
                if b.iter().any(|&u| p.cluster_of(u) == ci) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> WeightedGraph {
        WeightedGraph::unweighted(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn single_center_takes_everything() {
        let g = path(5);
        let s = ShiftAssignment::new(vec![2], vec![0.0]).unwrap();
        let p = mpx_cluster(&g, &s).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.centers(), Some(&[2][..]));
    }

    #[test]
    fn zero_shifts_on_all_vertices_give_singletons() {
        let g = path(6);
        let s = ShiftAssignment::new((0..6).collect(), vec![0.0; 6]).unwrap();
        let p = mpx_cluster(&g, &s).unwrap();
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn ties_follow_priority() {
        // Vertex 1 is equidistant from 0 and 2 with equal shifts.
        let g = path(3);
        let s = ShiftAssignment::new(vec![2, 0], vec![0.0, 0.0]).unwrap();
        let p = mpx_cluster(&g, &s).unwrap();
        assert_eq!(p.clusters(), &[vec![0, 1], vec![2]]);
        let s = s.with_priority(&[2, 0]).unwrap();
        let p = mpx_cluster(&g, &s).unwrap();
        assert_eq!(p.clusters(), &[vec![1, 2], vec![0]]);
    }

    #[test]
    fn bigger_shift_wins_and_empty_clusters_drop() {
        let g = path(5);
        let s = ShiftAssignment::new(vec![0, 4, 2], vec![5.0, 0.0, 0.0]).unwrap();
        let p = mpx_cluster(&g, &s).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.centers(), Some(&[0][..]));
    }

    #[test]
    fn shift_file_round_trip() {
        let s = ShiftAssignment::parse("# c d\n0 1.5\n3 0.25\n").unwrap();
        assert_eq!(s.centers, vec![0, 3]);
        assert_eq!(ShiftAssignment::parse(&s.write()).unwrap(), s);
        assert_eq!(ShiftAssignment::parse(""), Err(Error::NoCenters));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn path_and_intersection_properties(
            n in 2usize..14,
            extra in proptest::collection::vec((0usize..14, 0usize..14, 1u32..5), 0..10),
            tree in proptest::collection::vec((0usize..100, 1u32..5), 13),
            mask in proptest::collection::vec(any::<bool>(), 14),
            raw in proptest::collection::vec(0.0f64..6.0, 14),
        ) {
            let mut edges = std::collections::BTreeMap::new();
            for v in 1..n {
                edges.insert((tree[v - 1].0 % v, v), tree[v - 1].1 as f64);
            }
            for (a, b, w) in extra {
                let (a, b) = (a % n, b % n);
                if a != b {
                    edges.entry((a.min(b), a.max(b))).or_insert(w as f64);
                }
            }
            let g = WeightedGraph::new(n, edges.into_iter().map(|((a, b), w)| (a, b, w))).unwrap();
            let mut centers: Vec<usize> = (0..n).filter(|&v| mask[v]).collect();
            if centers.is_empty() {
                centers.push(0);
            }
            let shifts = centers.iter().map(|&c| raw[c]).collect();
            let s = ShiftAssignment::new(centers, shifts).unwrap();
            let p = mpx_cluster(&g, &s).unwrap();
            prop_assert_eq!(check_mpx_path_property(&g, &p).unwrap(), None);
            for v in 0..n {
                for r in [0.0, 0.5, 1.0, 2.0, 3.5] {
                    prop_assert!(check_mpx_intersection_property(&g, &s, &p, v, r).unwrap());
                }
            }
        }
    }
}
