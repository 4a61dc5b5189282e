//! Exact checkers for scattering partitions, sparse partitions and sparse
//! covers.
//!
//! All checkers share one [`Verifier`] per graph so that all-pairs shortest
//! paths are computed once.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{WeightedGraph, EPS};
use crate::metric::{connected_components, shortest_paths_inside, Metric};
use crate::partition::{Partition, SparseCover};

/// Default cap on the number of shortest paths enumerated per vertex pair.
pub const DEFAULT_PATH_CAP: usize = 10_000;

/// Which shortest paths a scattering check inspects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PathMode {
    /// One path per ordered pair, taken from the source's shortest-path tree.
    Canonical,
    /// Every shortest path, up to `cap` paths per pair.
    AllPaths { cap: usize },
}

impl PathMode {
    pub fn all_paths() -> Self {
        PathMode::AllPaths { cap: DEFAULT_PATH_CAP }
    }
}

/// The object achieving a reported worst value.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    None,
    Path(Vec<usize>),
    Ball { center: usize, radius: f64 },
    Cluster(usize),
    Vertex(usize),
}

/// Outcome of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub sigma: f64,
    pub tau: usize,
    pub delta: f64,
    /// Worst number of clusters met by a checked path or ball (or the worst
    /// membership count for covers).
    pub measured_tau: usize,
    pub tau_witness: Witness,
    /// Worst cluster diameter under the checked notion.
    pub measured_diameter: f64,
    pub diameter_witness: Witness,
    pub failures: Vec<String>,
}

impl VerificationReport {
    fn new(sigma: f64, tau: usize, delta: f64) -> Self {
        VerificationReport {
            ok: true,
            sigma,
            tau,
            delta,
            measured_tau: 0,
            tau_witness: Witness::None,
            measured_diameter: 0.0,
            diameter_witness: Witness::None,
            failures: Vec::new(),
        }
    }

    fn fail(&mut self, msg: String) {
        self.ok = false;
        if self.failures.len() < 20 {
            self.failures.push(msg);
        }
    }

    fn finish_tau(&mut self, what: &str) {
        if self.measured_tau > self.tau {
            let msg = format!("{what} meets {} clusters, bound {}", self.measured_tau, self.tau);
            self.fail(msg);
        }
    }
}

/// Cached all-pairs data for one graph.
pub struct Verifier<'g> {
    g: &'g WeightedGraph,
    metric: Metric,
}

impl<'g> Verifier<'g> {
    pub fn new(g: &'g WeightedGraph) -> Self {
        Verifier { g, metric: Metric::new(g) }
    }

    pub fn graph(&self) -> &WeightedGraph {
        self.g
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    fn check_size(&self, p: &Partition) -> Result<()> {
        if p.n() != self.g.n() {
            return Err(Error::NotAPartition(format!("partition has {} vertices, graph has {}", p.n(), self.g.n())));
        }
        Ok(())
    }

    fn strong_diameter(&self, cluster: &[usize], mask: &mut [bool]) -> f64 {
        for &v in cluster {
            mask[v] = true;
        }
        let mut best: f64 = 0.0;
        for &a in cluster {
            let dm = shortest_paths_inside(self.g, a, mask);
            for &b in cluster {
                best = best.max(dm.dist[b]);
            }
        }
        for &v in cluster {
            mask[v] = false;
        }
        best
    }

    fn check_diameters(&self, clusters: &[Vec<usize>], strong: bool, report: &mut VerificationReport) {
        let mut mask = vec![false; self.g.n()];
        for (i, c) in clusters.iter().enumerate() {
            let d = if strong { self.strong_diameter(c, &mut mask) } else { self.metric.weak_diameter(c) };
            if d > report.measured_diameter || report.diameter_witness == Witness::None {
                report.measured_diameter = d;
                report.diameter_witness = Witness::Cluster(i);
            }
            if d > report.delta + EPS {
                let kind = if strong { "strong" } else { "weak" };
                report.fail(format!("cluster {i} has {kind} diameter {d} > {}", report.delta));
            }
        }
    }

    /// Checks that every cluster is connected with weak diameter at most `Δ`
    /// and that every shortest path of length at most `Δ/σ` meets at most `τ`
    /// clusters.
    pub fn verify_scattering(
        &self,
        p: &Partition,
        sigma: f64,
        tau: usize,
        delta: f64,
        mode: PathMode,
    ) -> Result<VerificationReport> {
        self.check_size(p)?;
        let mut report = VerificationReport::new(sigma, tau, delta);
        for (i, c) in p.clusters().iter().enumerate() {
            if connected_components(self.g, c).len() != 1 {
                report.fail(format!("cluster {i} is disconnected"));
            }
        }
        self.check_diameters(p.clusters(), false, &mut report);
        let (worst, path) = self.measure_paths(p, delta / sigma, mode)?;
        report.measured_tau = worst;
        report.tau_witness = Witness::Path(path);
        report.finish_tau("shortest path");
        Ok(report)
    }

    /// Worst number of clusters met by a shortest path of length at most
    /// `len_bound`, with a path achieving it.
    pub fn measure_paths(&self, p: &Partition, len_bound: f64, mode: PathMode) -> Result<(usize, Vec<usize>)> {
        self.check_size(p)?;
        let n = self.g.n();
        let per_source: Vec<Result<(usize, Vec<usize>)>> = (0..n)
            .into_par_iter()
            .map(|u| match mode {
                PathMode::Canonical => Ok(self.canonical_from(p, u, len_bound)),
                PathMode::AllPaths { cap } => self.all_paths_from(p, u, len_bound, cap),
            })
            .collect();
        let mut best = (0, Vec::new());
        for r in per_source {
            let (t, path) = r?;
            if t > best.0 {
                best = (t, path);
            }
        }
        Ok(best)
    }

    fn canonical_from(&self, p: &Partition, u: usize, bound: f64) -> (usize, Vec<usize>) {
        let dm = self.metric.from(u);
        let n = self.g.n();
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(par) = dm.parent[v] {
                if dm.dist[v] <= bound + EPS {
                    children[par].push(v);
                }
            }
        }
        let mut counts = vec![0usize; p.len()];
        let mut distinct = 0;
        let mut best = (0, vec![u]);
        let mut stack: Vec<usize> = Vec::new();
        // Iterative DFS: (vertex, next child index).
        let mut frames: Vec<(usize, usize)> = vec![(u, 0)];
        let c = p.cluster_of(u);
        counts[c] += 1;
        distinct += 1;
        stack.push(u);
        best.0 = 1;
        while let Some(&mut (v, ref mut idx)) = frames.last_mut() {
            if *idx < children[v].len() {
                let w = children[v][*idx];
                *idx += 1;
                let cw = p.cluster_of(w);
                if counts[cw] == 0 {
                    distinct += 1;
                }
                counts[cw] += 1;
                stack.push(w);
                if distinct > best.0 {
                    best = (distinct, stack.clone());
                }
                frames.push((w, 0));
            } else {
                frames.pop();
                let x = stack.pop().expect("stack mirrors frames");
                let cx = p.cluster_of(x);
                counts[cx] -= 1;
                if counts[cx] == 0 {
                    distinct -= 1;
                }
            }
        }
        best
    }

    fn all_paths_from(&self, p: &Partition, u: usize, bound: f64, cap: usize) -> Result<(usize, Vec<usize>)> {
        let dm = self.metric.from(u);
        let n = self.g.n();
        // Successors in the shortest-path DAG, restricted to the length bound.
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                if dm.dist[a] > bound + EPS {
                    return Vec::new();
                }
                self.g
                    .neighbors(a)
                    .iter()
                    .filter(|&&(b, w)| dm.dist[b] <= bound + EPS && (dm.dist[a] + w - dm.dist[b]).abs() <= EPS)
                    .map(|&(b, _)| b)
                    .collect()
            })
            .collect();
        let mut reached = vec![0usize; n];
        let mut on_path = vec![false; n];
        let mut counts = vec![0usize; p.len()];
        let mut distinct = 1;
        let mut best = (1, vec![u]);
        let mut stack = vec![u];
        let mut frames: Vec<(usize, usize)> = vec![(u, 0)];
        counts[p.cluster_of(u)] = 1;
        on_path[u] = true;
        while let Some(&mut (v, ref mut idx)) = frames.last_mut() {
            if *idx < succ[v].len() {
                let w = succ[v][*idx];
                *idx += 1;
                if on_path[w] {
                    continue;
                }
                reached[w] += 1;
                if reached[w] > cap {
                    return Err(Error::PathExplosion { u, v: w, cap });
                }
                on_path[w] = true;
                let cw = p.cluster_of(w);
                if counts[cw] == 0 {
                    distinct += 1;
                }
                counts[cw] += 1;
                stack.push(w);
                if distinct > best.0 {
                    best = (distinct, stack.clone());
                }
                frames.push((w, 0));
            } else {
                frames.pop();
                let x = stack.pop().expect("stack mirrors frames");
                on_path[x] = false;
                let cx = p.cluster_of(x);
                counts[cx] -= 1;
                if counts[cx] == 0 {
                    distinct -= 1;
                }
            }
        }
        Ok(best)
    }

    /// Worst number of clusters met by a ball of radius `radius`, with the
    /// ball achieving it. Every critical radius up to `radius` is swept.
    pub fn measure_balls(&self, p: &Partition, radius: f64) -> (usize, usize, f64) {
        let n = self.g.n();
        let per: Vec<(usize, f64)> = (0..n)
            .into_par_iter()
            .map(|v| {
                let dist = &self.metric.from(v).dist;
                let mut order: Vec<usize> = (0..n).filter(|&u| dist[u] <= radius + EPS).collect();
                order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
                let mut seen = vec![false; p.len()];
                let mut distinct = 0;
                let mut best = (0, 0.0);
                for &u in &order {
                    let c = p.cluster_of(u);
                    if !seen[c] {
                        seen[c] = true;
                        distinct += 1;
                        if distinct > best.0 {
                            best = (distinct, dist[u]);
                        }
                    }
                }
                best
            })
            .collect();
        let mut best = (0, 0, 0.0);
        for (v, &(t, r)) in per.iter().enumerate() {
            if t > best.0 {
                best = (t, v, r);
            }
        }
        best
    }

    fn verify_sparse(&self, p: &Partition, sigma: f64, tau: usize, delta: f64, strong: bool) -> Result<VerificationReport> {
        self.check_size(p)?;
        let mut report = VerificationReport::new(sigma, tau, delta);
        self.check_diameters(p.clusters(), strong, &mut report);
        let (t, v, r) = self.measure_balls(p, delta / sigma);
        report.measured_tau = t;
        report.tau_witness = Witness::Ball { center: v, radius: r };
        report.finish_tau("ball");
        Ok(report)
    }

    /// Weak diameter at most `Δ`; every ball of radius up to `Δ/σ` meets at
    /// most `τ` clusters. Clusters need not be connected.
    pub fn verify_weak_sparse(&self, p: &Partition, sigma: f64, tau: usize, delta: f64) -> Result<VerificationReport> {
        self.verify_sparse(p, sigma, tau, delta, false)
    }

    /// As [`Verifier::verify_weak_sparse`] with strong diameter.
    pub fn verify_strong_sparse(&self, p: &Partition, sigma: f64, tau: usize, delta: f64) -> Result<VerificationReport> {
        self.verify_sparse(p, sigma, tau, delta, true)
    }

    /// Diameter bound, padding of every `Δ/σ`-ball and at most `τ`
    /// memberships per vertex.
    pub fn verify_cover(&self, cover: &SparseCover, sigma: f64, tau: usize, delta: f64, strong: bool) -> Result<VerificationReport> {
        let n = self.g.n();
        let mut report = VerificationReport::new(sigma, tau, delta);
        for c in &cover.clusters {
            if c.is_empty() {
                return Err(Error::EmptyCluster);
            }
            if let Some(&v) = c.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        self.check_diameters(&cover.clusters, strong, &mut report);
        let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, c) in cover.clusters.iter().enumerate() {
            for &v in c {
                member_of[v].push(i);
            }
        }
        let masks: Vec<Vec<bool>> = cover
            .clusters
            .iter()
            .map(|c| {
                let mut m = vec![false; n];
                for &v in c {
                    m[v] = true;
                }
                m
            })
            .collect();
        let radius = delta / sigma;
        for v in 0..n {
            let dist = &self.metric.from(v).dist;
            let padded = member_of[v]
                .iter()
                .any(|&i| (0..n).all(|u| dist[u] > radius + EPS || masks[i][u]));
            if !padded {
                report.fail(format!("ball of radius {radius} around {v} is not inside any cluster"));
                if report.diameter_witness == Witness::None {
                    report.diameter_witness = Witness::Vertex(v);
                }
            }
        }
        for (v, m) in member_of.iter().enumerate() {
            if m.len() > report.measured_tau {
                report.measured_tau = m.len();
                report.tau_witness = Witness::Vertex(v);
            }
        }
        report.finish_tau("vertex membership");
        Ok(report)
    }
}

/// One-shot form of [`Verifier::verify_scattering`].
pub fn verify_scattering(
    g: &WeightedGraph,
    p: &Partition,
    sigma: f64,
    tau: usize,
    delta: f64,
    mode: PathMode,
) -> Result<VerificationReport> {
    Verifier::new(g).verify_scattering(p, sigma, tau, delta, mode)
}

/// One-shot form of [`Verifier::verify_weak_sparse`].
pub fn verify_weak_sparse(g: &WeightedGraph, p: &Partition, sigma: f64, tau: usize, delta: f64) -> Result<VerificationReport> {
    Verifier::new(g).verify_weak_sparse(p, sigma, tau, delta)
}

/// One-shot form of [`Verifier::verify_strong_sparse`].
pub fn verify_strong_sparse(g: &WeightedGraph, p: &Partition, sigma: f64, tau: usize, delta: f64) -> Result<VerificationReport> {
    Verifier::new(g).verify_strong_sparse(p, sigma, tau, delta)
}

/// One-shot form of [`Verifier::verify_cover`].
pub fn verify_cover(
    g: &WeightedGraph,
    cover: &SparseCover,
    sigma: f64,
    tau: usize,
    delta: f64,
    strong: bool,
) -> Result<VerificationReport> {
    Verifier::new(g).verify_cover(cover, sigma, tau, delta, strong)
}

/// Worst number of clusters met by a shortest path of length at most
/// `len_bound`.
pub fn measure_scattering_tau(g: &WeightedGraph, p: &Partition, len_bound: f64, mode: PathMode) -> Result<(usize, Vec<usize>)> {
    Verifier::new(g).measure_paths(p, len_bound, mode)
}

/// Parameters under which a `(σ, τ, Δ)`-scattering partition is also
/// scattering for paths of length up to `Δ`: such a path splits into at most
/// `⌈σ⌉` pieces of length at most `Δ/σ`.
pub fn as_sigma_one(sigma: f64, tau: usize) -> (f64, usize) {
    (1.0, sigma.ceil() as usize * tau)
}
