//! Shortest-path decompositions and the partitions built from them.
//!
//! A hierarchy repeatedly removes one shortest path from every part and
//! splits what is left into connected components, until nothing remains.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{WeightedGraph, EPS};
use crate::metric::{connected_components, set_distances_inside, shortest_paths_inside, Metric};
use crate::mpx::{center_distances, mpx_cluster_with, ShiftAssignment};
use crate::net::{path_net, sequence_net};
use crate::partition::Partition;

/// A part of one level together with the shortest path removed from it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdPart {
    pub part: Vec<usize>,
    pub path: Vec<usize>,
}

/// Levels of parts. Index 0 holds the first level, whose single part is the
/// whole graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdHierarchy {
    pub levels: Vec<Vec<SpdPart>>,
}

impl SpdHierarchy {
    /// Number of levels.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Parses lines `level <i> part <v...> path <v...>` with 1-based levels.
    pub fn parse(text: &str) -> Result<Self> {
        let mut levels: Vec<Vec<SpdPart>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::Parse { line: i + 1, message: m.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 2 || toks[0] != "level" {
                return Err(bad("expected `level <i> part <v...> path <v...>`"));
            }
            let lvl: usize = toks[1].parse().map_err(|_| bad("bad level"))?;
            if lvl == 0 {
                return Err(bad("levels start at 1"));
            }
            let pp = toks.iter().position(|&t| t == "part").ok_or_else(|| bad("missing `part`"))?;
            let qp = toks.iter().position(|&t| t == "path").ok_or_else(|| bad("missing `path`"))?;
            if pp != 2 || qp < pp {
                return Err(bad("expected `part` before `path`"));
            }
            let nums = |s: &[&str]| -> Result<Vec<usize>> { s.iter().map(|t| t.parse().map_err(|_| bad("bad vertex"))).collect() };
            let part = nums(&toks[pp + 1..qp])?;
            let path = nums(&toks[qp + 1..])?;
            while levels.len() < lvl {
                levels.push(Vec::new());
            }
            levels[lvl - 1].push(SpdPart { part, path });
        }
        Ok(SpdHierarchy { levels })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        for (i, lvl) in self.levels.iter().enumerate() {
            for p in lvl {
                let part: Vec<String> = p.part.iter().map(|v| v.to_string()).collect();
                let path: Vec<String> = p.path.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "level {} part {} path {}", i + 1, part.join(" "), path.join(" "));
            }
        }
        out
    }
}

fn mask_of(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

/// Checks that each path is a shortest path of its part and that every
/// level consists of the components left over by the previous one.
pub fn validate_spd(g: &WeightedGraph, spd: &SpdHierarchy) -> Result<()> {
    let n = g.n();
    let mut expected: Vec<Vec<usize>> = vec![(0..n).collect()];
    for (li, level) in spd.levels.iter().enumerate() {
        let mut given: Vec<Vec<usize>> = level
            .iter()
            .map(|p| {
                let mut s = p.part.clone();
                s.sort_unstable();
                s
            })
            .collect();
        given.sort();
        expected.sort();
        if given != expected {
            return Err(Error::NotComponentRefinement { level: li + 1 });
        }
        let mut next = Vec::new();
        for (pi, p) in level.iter().enumerate() {
            let mask = mask_of(n, &p.part);
            let q = &p.path;
            if q.is_empty() || q.iter().any(|&v| v >= n || !mask[v]) {
                return Err(Error::NotShortestPath { level: li + 1, part: pi });
            }
            let mut len = 0.0;
            for w in q.windows(2) {
                len += g.weight(w[0], w[1]).ok_or(Error::NotShortestPath { level: li + 1, part: pi })?;
            }
            let mut sorted = q.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let d = shortest_paths_inside(g, q[0], &mask).dist[q[q.len() - 1]];
            if sorted.len() != q.len() || (len - d).abs() > EPS {
                return Err(Error::NotShortestPath { level: li + 1, part: pi });
            }
            let qm = mask_of(n, q);
            let rest: Vec<usize> = p.part.iter().copied().filter(|&v| !qm[v]).collect();
            next.extend(connected_components(g, &rest));
        }
        expected = next;
    }
    if let Some(c) = expected.first() {
        return Err(Error::VertexMissed(c[0]));
    }
    Ok(())
}

/// Picks a shortest path inside a part.
pub type PathChooser = Box<dyn Fn(&WeightedGraph, &[usize]) -> Vec<usize>>;

/// How [`build_spd`] picks the path removed from each part.
pub enum SpdStrategy {
    /// Double sweep from the smallest id, then the canonical shortest path
    /// between the two far ends inside the part.
    ExtremePair,
    /// Caller-supplied choice; receives the graph and the part, returns a
    /// shortest path of `G[part]`.
    Custom(PathChooser),
}

fn extreme_pair_path(g: &WeightedGraph, part: &[usize]) -> Vec<usize> {
    let mask = mask_of(g.n(), part);
    let far = |s: usize| {
        let dm = shortest_paths_inside(g, s, &mask);
        let t = part
            .iter()
            .copied()
            .max_by(|&a, &b| dm.dist[a].total_cmp(&dm.dist[b]).then(b.cmp(&a)))
            .expect("non-empty part");
        (t, dm)
    };
    let start = *part.iter().min().expect("non-empty part");
    let (a, _) = far(start);
    let (b, dm) = far(a);
    dm.path_to(b).expect("part is connected")
}

/// Builds a hierarchy for a connected graph.
pub fn build_spd(g: &WeightedGraph, strategy: &SpdStrategy) -> Result<SpdHierarchy> {
    g.require_connected()?;
    let mut levels = Vec::new();
    let mut current: Vec<Vec<usize>> = if g.n() == 0 { Vec::new() } else { vec![(0..g.n()).collect()] };
    while !current.is_empty() {
        let mut level = Vec::new();
        let mut next = Vec::new();
        for (pi, part) in current.into_iter().enumerate() {
            let path = match strategy {
                SpdStrategy::ExtremePair => extreme_pair_path(g, &part),
                SpdStrategy::Custom(f) => f(g, &part),
            };
            if path.is_empty() || path.iter().any(|v| part.binary_search(v).is_err()) {
                return Err(Error::NotShortestPath { level: levels.len() + 1, part: pi });
            }
            let qm = mask_of(g.n(), &path);
            let rest: Vec<usize> = part.iter().copied().filter(|&v| !qm[v]).collect();
            next.extend(connected_components(g, &rest));
            level.push(SpdPart { part, path });
        }
        levels.push(level);
        current = next;
    }
    let spd = SpdHierarchy { levels };
    validate_spd(g, &spd)?;
    Ok(spd)
}

/// Strong-diameter sparse partition: for a hierarchy of depth `ρ`, with
/// `ε = 1/ρ`, level-`i` paths get a greedy net of spacing
/// `ε · α_(i+1)` whose points carry shift `α_i = (1 + 2ε)^(ρ+1-i) Δ`;
/// clusters come from the shifted-distance rule over all net points.
/// Strong diameters are at most `2α_1 < 2e²Δ`.
pub fn spd_strong_partition(g: &WeightedGraph, spd: &SpdHierarchy, delta: f64) -> Result<Partition> {
    validate_spd(g, spd)?;
    let rho = spd.depth();
    if rho == 0 {
        return Err(Error::EmptySet);
    }
    let eps = 1.0 / rho as f64;
    let alpha = |i: usize| (1.0 + 2.0 * eps).powi((rho + 1 - i) as i32) * delta;
    let metric = Metric::new(g);
    let mut centers = Vec::new();
    let mut shifts = Vec::new();
    for (li, level) in spd.levels.iter().enumerate() {
        let i = li + 1;
        let beta = eps * alpha(i + 1);
        for p in level {
            for t in sequence_net(&p.path, beta, |a, b| metric.d(a, b)) {
                centers.push(t);
                shifts.push(alpha(i));
            }
        }
    }
    let sa = ShiftAssignment::new(centers, shifts)?;
    let dist = center_distances(g, &sa.centers);
    mpx_cluster_with(&sa, &dist, 2.0 * alpha(1))
}

/// Parameters under which [`spd_strong_partition`] is checked:
/// `(2e²ρ, (2ρ + 4)ρ, 2e²Δ)`.
pub fn spd_strong_params(rho: usize, delta: f64) -> (f64, usize, f64) {
    let e2 = std::f64::consts::E.powi(2);
    (2.0 * e2 * rho as f64, (2 * rho + 4) * rho, 2.0 * e2 * delta)
}

/// Weak-diameter sparse partition with weak diameter at most `Δ`.
///
/// Going down the hierarchy, each part claims the still-unassigned vertices
/// within `Δ/4` of its path (inside the part). Each claimed set is then cut
/// by a net of the path with spacing `net_spacing` (distance along the
/// path): net points in path order take the remaining claimed vertices
/// within `Δ/2` of them inside the part.
pub fn spd_weak_partition(g: &WeightedGraph, spd: &SpdHierarchy, delta: f64, net_spacing: f64) -> Result<Partition> {
    validate_spd(g, spd)?;
    let n = g.n();
    let mut active = vec![true; n];
    let mut claimed: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (li, level) in spd.levels.iter().enumerate() {
        for (pi, p) in level.iter().enumerate() {
            let mask = mask_of(n, &p.part);
            let d = set_distances_inside(g, &p.path, &mask);
            let c: Vec<usize> = p.part.iter().copied().filter(|&v| active[v] && d[v] <= delta / 4.0 + EPS).collect();
            for &v in &c {
                active[v] = false;
            }
            claimed.push((li, pi, c));
        }
    }
    if let Some(v) = active.iter().position(|&a| a) {
        return Err(Error::VertexMissed(v));
    }
    let mut clusters = Vec::new();
    for (li, pi, c) in claimed {
        if c.is_empty() {
            continue;
        }
        let p = &spd.levels[li][pi];
        let mask = mask_of(n, &p.part);
        let mut left = mask_of(n, &c);
        let mut remaining = c.len();
        for t in path_net(g, &p.path, net_spacing) {
            let dt = shortest_paths_inside(g, t, &mask).dist;
            let cl: Vec<usize> = c.iter().copied().filter(|&u| left[u] && dt[u] <= delta / 2.0 + EPS).collect();
            for &u in &cl {
                left[u] = false;
            }
            remaining -= cl.len();
            if !cl.is_empty() {
                clusters.push(cl);
            }
        }
        if remaining > 0 {
            let v = c.iter().copied().find(|&u| left[u]).expect("some vertex left");
            return Err(Error::SchemeViolation(format!("vertex {v} not reached by any net point")));
        }
    }
    Partition::from_clusters(n, clusters, None, delta)
}

/// Checks `|B(v, r) ∩ net| < 2r/spacing + 1` for a net on a shortest path
/// whose points are pairwise more than `spacing` apart.
pub fn path_net_count_check(g: &WeightedGraph, net: &[usize], v: usize, r: f64, spacing: f64) -> bool {
    let d = crate::metric::shortest_paths(g, v).dist;
    let count = net.iter().filter(|&&t| d[t] <= r + EPS).count();
    (count as f64) < 2.0 * r / spacing + 1.0
}
