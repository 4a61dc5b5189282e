//! Steiner point removal: contract every vertex into a terminal so that the
//! resulting minor, weighted by terminal distances, stretches terminal
//! distances as little as possible.
//!
//! Vertices are handled ring by ring, where ring `i` holds the vertices at
//! distance `[2^(i-1), 2^i)` from the terminals (after scaling so that the
//! smallest distance is 1). In round `i` the unassigned vertices are
//! partitioned with diameter `2^(i-1)`; clusters touching ring `i` are then
//! attached, level by level, through short edges to vertices that already
//! have a terminal.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cactus::cactus_scattering_partition;
use crate::chordal::chordal_scattering_partition;
use crate::error::{Error, Result};
use crate::general::general_strong_partition;
use crate::graph::{WeightedGraph, EPS};
use crate::metric::{connected_components, induced_subgraph, multi_source_distances, shortest_paths, Metric};
use crate::partition::Partition;
use crate::tree::{tree_scattering_partition, RootedTree};
use crate::verify::{as_sigma_one, PathMode, Verifier};

/// A partitioning scheme with a scattering guarantee.
pub trait ScatteringScheme: Sync {
    fn name(&self) -> &'static str;
    /// `(σ, τ)` guaranteed on connected inputs with `n` vertices.
    fn params(&self, n: usize) -> (f64, usize);
    /// Partition of a connected graph with weak diameter at most `Δ`.
    fn partition(&self, g: &WeightedGraph, delta: f64) -> Result<Partition>;
}

/// Ring partition of trees, `(2, 3)`.
pub struct TreeScheme;
/// Label propagation on unweighted chordal graphs, `(2, 3)`.
pub struct ChordalScheme;
/// Ear-by-ear construction on cacti, `(4, 5)`.
pub struct CactusScheme;
/// Exponential shifts on every vertex; its parameters hold only with high
/// probability.
pub struct GeneralScheme {
    pub seed: u64,
}

impl ScatteringScheme for TreeScheme {
    fn name(&self) -> &'static str {
        "tree"
    }
    fn params(&self, _n: usize) -> (f64, usize) {
        (2.0, 3)
    }
    fn partition(&self, g: &WeightedGraph, delta: f64) -> Result<Partition> {
        Ok(tree_scattering_partition(&RootedTree::new(g, 0)?, delta))
    }
}

impl ScatteringScheme for ChordalScheme {
    fn name(&self) -> &'static str {
        "chordal"
    }
    fn params(&self, _n: usize) -> (f64, usize) {
        (2.0, 3)
    }
    fn partition(&self, g: &WeightedGraph, delta: f64) -> Result<Partition> {
        chordal_scattering_partition(g, delta.floor())
    }
}

impl ScatteringScheme for CactusScheme {
    fn name(&self) -> &'static str {
        "cactus"
    }
    fn params(&self, _n: usize) -> (f64, usize) {
        (4.0, 5)
    }
    fn partition(&self, g: &WeightedGraph, delta: f64) -> Result<Partition> {
        cactus_scattering_partition(g, delta)
    }
}

impl ScatteringScheme for GeneralScheme {
    fn name(&self) -> &'static str {
        "general"
    }
    fn params(&self, n: usize) -> (f64, usize) {
        let (alpha, _, bound) = crate::general::general_padding_gate(n.max(2), 1.0);
        (8.0 * alpha, bound.ceil() as usize)
    }
    fn partition(&self, g: &WeightedGraph, delta: f64) -> Result<Partition> {
        Ok(general_strong_partition(g, delta, self.seed)?.partition)
    }
}

/// A connected graph with a set of terminals.
#[derive(Debug, Clone)]
pub struct SprInstance {
    pub graph: WeightedGraph,
    /// Sorted, distinct terminal ids.
    pub terminals: Vec<usize>,
}

impl SprInstance {
    pub fn new(graph: WeightedGraph, mut terminals: Vec<usize>) -> Result<Self> {
        graph.require_connected()?;
        terminals.sort_unstable();
        terminals.dedup();
        if terminals.is_empty() {
            return Err(Error::EmptySet);
        }
        for &t in &terminals {
            graph.check_vertex(t)?;
        }
        Ok(SprInstance { graph, terminals })
    }

    /// Parses a terminal list: whitespace- or comma-separated ids, `#`
    /// comments allowed.
    pub fn parse_terminals(text: &str) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                out.push(tok.parse().map_err(|_| Error::Parse { line: i + 1, message: format!("bad terminal `{tok}`") })?);
            }
        }
        Ok(out)
    }
}

/// The terminal each vertex is contracted into, and the round that decided it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TerminalAssignment {
    pub owner: Vec<usize>,
    /// Round in which each vertex was assigned; `0` for terminals.
    pub iteration: Vec<usize>,
}

/// One cluster handled in some round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterRecord {
    pub vertices: Vec<usize>,
    pub level: usize,
    /// Already-assigned vertex whose terminal the cluster inherits.
    pub link: usize,
}

/// Clusters attached in one round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    /// Partition diameter `2^(round-1)` in scaled units.
    pub delta: f64,
    pub clusters: Vec<ClusterRecord>,
}

/// Stretch of terminal distances in the minor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    pub distortion: f64,
    /// Terminal pair achieving it.
    pub pair: (usize, usize),
    /// `stretch[i][j] = d_M(t_i, t_j) / d_G(t_i, t_j)`, 1 on the diagonal.
    pub stretch: Vec<Vec<f64>>,
    /// Whether `d_M >= d_G` held for every pair.
    pub dominating: bool,
}

/// Output of [`solve_spr`].
#[derive(Debug, Clone, Serialize)]
pub struct SprSolution {
    pub terminals: Vec<usize>,
    pub assignment: TerminalAssignment,
    /// Minor on terminal indices (position in `terminals`).
    #[serde(skip)]
    pub minor: WeightedGraph,
    pub distortion: DistortionReport,
    pub rounds: Vec<RoundRecord>,
    /// Factor that scaled the input so its smallest distance became 1.
    pub scale: f64,
    /// Scaled distance from each vertex to the nearest terminal.
    pub terminal_distance: Vec<f64>,
}

/// Options for [`solve_spr`].
#[derive(Debug, Clone, Copy)]
pub struct SprOptions {
    /// Re-check each round's partition against the scheme's guarantee.
    pub check_scheme: bool,
}

impl Default for SprOptions {
    fn default() -> Self {
        SprOptions { check_scheme: true }
    }
}

fn ring_index(d: f64) -> usize {
    // Ring i holds [2^(i-1), 2^i).
    (d.log2().floor() as i64 + 1).max(1) as usize
}

/// Runs the ring-by-ring contraction with `scheme` as partitioner.
pub fn solve_spr(inst: &SprInstance, scheme: &dyn ScatteringScheme, opts: SprOptions) -> Result<SprSolution> {
    let g0 = &inst.graph;
    let n = g0.n();
    let min = Metric::new(g0).min_distance();
    let scale = match min {
        Some(m) if m > 0.0 => 1.0 / m,
        Some(_) => return Err(Error::InvalidParameter("distinct vertices at distance 0".into())),
        None => 1.0,
    };
    let g = g0.scaled(scale);
    let sources: Vec<(usize, f64)> = inst.terminals.iter().map(|&t| (t, 0.0)).collect();
    let dk = multi_source_distances(&g, &sources);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut iteration = vec![0usize; n];
    for &t in &inst.terminals {
        owner[t] = Some(t);
    }
    let mut rounds = Vec::new();
    let max_round = dk.iter().map(|&d| if d > 0.0 { ring_index(d) } else { 0 }).max().unwrap_or(0);
    for i in 1..=max_round {
        let unassigned: Vec<usize> = (0..n).filter(|&v| owner[v].is_none()).collect();
        if unassigned.is_empty() {
            break;
        }
        let in_ring = |v: usize| dk[v] >= (2f64).powi(i as i32 - 1) - EPS && dk[v] < (2f64).powi(i as i32) - EPS;
        if !unassigned.iter().any(|&v| in_ring(v)) {
            continue;
        }
        let delta = 2f64.powi(i as i32 - 1);
        let reach = 2f64.powi(i as i32);
        // Partition every component of G_i.
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for comp in connected_components(&g, &unassigned) {
            let (h, remap) = induced_subgraph(&g, &comp)?;
            let p = scheme.partition(&h, delta)?;
            if opts.check_scheme {
                check_round(scheme, &h, &p, delta)?;
            }
            clusters.extend(p.lift(&remap).0);
        }
        let mut cluster_of = vec![usize::MAX; n];
        for (ci, c) in clusters.iter().enumerate() {
            for &v in c {
                cluster_of[v] = ci;
            }
        }
        let active: Vec<usize> = (0..clusters.len()).filter(|&ci| clusters[ci].iter().any(|&v| in_ring(v))).collect();
        let mut level: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        // Level 1: a short edge to an assigned vertex.
        let mut frontier = Vec::new();
        for &ci in &active {
            let link = clusters[ci]
                .iter()
                .flat_map(|&v| g.neighbors(v).iter().map(move |&(u, w)| (u, w, v)))
                .filter(|&(u, w, _)| owner[u].is_some() && w <= reach + EPS)
                .map(|(u, _, _)| u)
                .min();
            if let Some(u) = link {
                level.insert(ci, (1, u));
                frontier.push(ci);
            }
        }
        let mut l = 1;
        while !frontier.is_empty() {
            l += 1;
            let prev: Vec<usize> = std::mem::take(&mut frontier);
            let in_prev = |c: usize| prev.contains(&c);
            for &ci in &active {
                if level.contains_key(&ci) {
                    continue;
                }
                let link = clusters[ci]
                    .iter()
                    .flat_map(|&v| g.neighbors(v).iter().map(move |&(u, w)| (u, w)))
                    .filter(|&(u, w)| cluster_of[u] != usize::MAX && in_prev(cluster_of[u]) && w <= reach + EPS)
                    .map(|(u, _)| u)
                    .min();
                if let Some(u) = link {
                    level.insert(ci, (l, u));
                    frontier.push(ci);
                }
            }
        }
        if let Some(&ci) = active.iter().find(|&&ci| !level.contains_key(&ci)) {
            return Err(Error::UnlinkableCluster(clusters[ci][0]));
        }
        let mut order: Vec<(usize, usize, usize)> = level.iter().map(|(&ci, &(l, u))| (l, ci, u)).collect();
        order.sort_unstable();
        let mut record = RoundRecord { round: i, delta, clusters: Vec::new() };
        for (l, ci, u) in order {
            let t = owner[u].expect("link is assigned");
            for &v in &clusters[ci] {
                owner[v] = Some(t);
                iteration[v] = i;
            }
            record.clusters.push(ClusterRecord { vertices: clusters[ci].clone(), level: l, link: u });
        }
        rounds.push(record);
    }
    if let Some(v) = owner.iter().position(|o| o.is_none()) {
        return Err(Error::SchemeViolation(format!("vertex {v} was never assigned")));
    }
    let owner: Vec<usize> = owner.into_iter().map(|o| o.expect("checked")).collect();
    let minor = contract_minor(g0, &inst.terminals, &owner)?;
    let distortion = distortion(g0, &inst.terminals, &minor);
    Ok(SprSolution {
        terminals: inst.terminals.clone(),
        assignment: TerminalAssignment { owner, iteration },
        minor,
        distortion,
        rounds,
        scale,
        terminal_distance: dk,
    })
}

fn check_round(scheme: &dyn ScatteringScheme, h: &WeightedGraph, p: &Partition, delta: f64) -> Result<()> {
    let (sigma, tau) = scheme.params(h.n());
    let r = Verifier::new(h).verify_scattering(p, sigma, tau, delta, PathMode::Canonical)?;
    if r.ok {
        Ok(())
    } else {
        Err(Error::SchemeViolation(format!("{}: {}", scheme.name(), r.failures.join("; "))))
    }
}

/// Contracts each fiber `{v : owner[v] = t}` into its terminal. Minor
/// vertices are terminal indices; an edge joins fibers adjacent in `g` and
/// weighs the distance between the two terminals in `g`.
pub fn contract_minor(g: &WeightedGraph, terminals: &[usize], owner: &[usize]) -> Result<WeightedGraph> {
    let n = g.n();
    let k = terminals.len();
    let mut index = vec![usize::MAX; n];
    for (i, &t) in terminals.iter().enumerate() {
        index[t] = i;
    }
    let mut fibers = vec![Vec::new(); k];
    for v in 0..n {
        let t = owner[v];
        if t >= n || index[t] == usize::MAX {
            return Err(Error::InvalidParameter(format!("vertex {v} is owned by non-terminal {t}")));
        }
        fibers[index[t]].push(v);
    }
    for (i, &t) in terminals.iter().enumerate() {
        if owner[t] != t || connected_components(g, &fibers[i]).len() != 1 {
            return Err(Error::DisconnectedFiber(t));
        }
    }
    let dist: Vec<Vec<f64>> = terminals.iter().map(|&t| shortest_paths(g, t).dist).collect();
    let mut pairs = std::collections::BTreeSet::new();
    for e in g.edges() {
        let (a, b) = (index[owner[e.u]], index[owner[e.v]]);
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    WeightedGraph::new(k, pairs.into_iter().map(|(a, b)| (a, b, dist[a][terminals[b]])))
}

/// Exact worst-case ratio `d_M / d_G` over terminal pairs.
pub fn distortion(g: &WeightedGraph, terminals: &[usize], minor: &WeightedGraph) -> DistortionReport {
    let k = terminals.len();
    let dg: Vec<Vec<f64>> = terminals.iter().map(|&t| shortest_paths(g, t).dist).collect();
    let dm = Metric::new(minor);
    let mut stretch = vec![vec![1.0; k]; k];
    let mut best = (1.0, (terminals[0], terminals[0]));
    let mut dominating = true;
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let a = dg[i][terminals[j]];
            let b = dm.d(i, j);
            if b < a - EPS * a.max(1.0) {
                dominating = false;
            }
            let s = if a > 0.0 { b / a } else { 1.0 };
            stretch[i][j] = s;
            if i < j && s > best.0 {
                best = (s, (terminals[i], terminals[j]));
            }
        }
    }
    DistortionReport { distortion: best.0, pair: best.1, stretch, dominating }
}

/// Outcome of [`assignment_diagnostics`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SprDiagnostics {
    pub tau: usize,
    pub max_level: usize,
    /// Largest `d(v, f(v)) / (3τ 2^i)` over assigned vertices.
    pub worst_round_ratio: f64,
    /// Largest `d(v, f(v)) / (6τ D(v))` over non-terminals.
    pub worst_terminal_ratio: f64,
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Checks the structural bounds of a solution for scattering parameter
/// `τ` (with `σ = 1`): cluster levels at most `τ`; `d(v, f(v)) <= 3τ 2^i`
/// for a vertex assigned in round `i`; `d(v, f(v)) <= 6τ D(v)`; and each
/// vertex assigned in its own ring's round or the one before, so that
/// `2^(i-1) <= 2 D(v)`.
pub fn assignment_diagnostics(inst: &SprInstance, sol: &SprSolution, tau: usize) -> SprDiagnostics {
    let g = inst.graph.scaled(sol.scale);
    let mut failures = Vec::new();
    let max_level = sol.rounds.iter().flat_map(|r| r.clusters.iter().map(|c| c.level)).max().unwrap_or(0);
    if max_level > tau {
        failures.push(format!("cluster level {max_level} exceeds τ = {tau}"));
    }
    let mut dist_to: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for &t in &sol.terminals {
        dist_to.insert(t, shortest_paths(&g, t).dist);
    }
    let t = tau as f64;
    let mut worst_round_ratio: f64 = 0.0;
    let mut worst_terminal_ratio: f64 = 0.0;
    for v in 0..g.n() {
        let i = sol.assignment.iteration[v];
        if i == 0 {
            continue;
        }
        let d = dist_to[&sol.assignment.owner[v]][v];
        let dv = sol.terminal_distance[v];
        let a = d / (3.0 * t * 2f64.powi(i as i32));
        let b = d / (6.0 * t * dv);
        worst_round_ratio = worst_round_ratio.max(a);
        worst_terminal_ratio = worst_terminal_ratio.max(b);
        if a > 1.0 + EPS {
            failures.push(format!("vertex {v}: d(v, f(v)) = {d} exceeds 3τ2^{i}"));
        }
        if b > 1.0 + EPS {
            failures.push(format!("vertex {v}: d(v, f(v)) = {d} exceeds 6τ D(v)"));
        }
        let ring = ring_index(dv);
        if i > ring || i + 1 < ring || 2f64.powi(i as i32 - 1) > 2.0 * dv + EPS {
            failures.push(format!("vertex {v} in ring {ring} assigned in round {i}"));
        }
    }
    failures.truncate(20);
    SprDiagnostics { tau, max_level, worst_round_ratio, worst_terminal_ratio, ok: failures.is_empty(), failures }
}

/// The `τ` that a scheme's `(σ, τ)` guarantee yields for diameter-length
/// paths.
pub fn effective_tau(scheme: &dyn ScatteringScheme, n: usize) -> usize {
    let (sigma, tau) = scheme.params(n);
    as_sigma_one(sigma, tau).1
}

/// Small worked instance: four terminals on a weighted tree whose given
/// contraction stretches the pair `(t1, t3)` from 4 to 12.
///
/// Returns the graph, the terminals `[t1, t2, t3, t4] = [0, 1, 2, 3]` and
/// the owner of every vertex.
pub fn contraction_example() -> (WeightedGraph, Vec<usize>, Vec<usize>) {
    // Steiner vertices a = 4, b = 5; t1 - a - b - t3 is the short route.
    let g = WeightedGraph::new(6, [(0, 4, 1.0), (4, 5, 2.0), (5, 2, 1.0), (1, 4, 2.0), (3, 5, 2.0)])
        .expect("valid example");
    (g, vec![0, 1, 2, 3], vec![0, 1, 2, 3, 1, 3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn path_with_one_steiner_vertex() {
        let g = gen::path(3);
        let inst = SprInstance::new(g, vec![0, 2]).unwrap();
        let sol = solve_spr(&inst, &TreeScheme, SprOptions::default()).unwrap();
        assert_eq!(sol.assignment.owner, vec![0, 0, 2]);
        assert_eq!(sol.assignment.iteration, vec![0, 1, 0]);
        assert_eq!(sol.minor.weight(0, 1), Some(2.0));
        assert_eq!(sol.distortion.distortion, 1.0);
    }

    #[test]
    fn star_with_terminal_leaves() {
        // The center joins the smallest leaf; the other leaves then reach
        // each other only through that fiber, at cost 4 against distance 2.
        let g = gen::star(4);
        let inst = SprInstance::new(g, vec![1, 2, 3, 4]).unwrap();
        let sol = solve_spr(&inst, &TreeScheme, SprOptions::default()).unwrap();
        assert_eq!(sol.assignment.owner[0], 1);
        assert_eq!(sol.distortion.distortion, 2.0);
        assert_eq!(sol.distortion.pair, (2, 3));
        let two = SprInstance::new(gen::star(2), vec![1, 2]).unwrap();
        assert_eq!(solve_spr(&two, &TreeScheme, SprOptions::default()).unwrap().distortion.distortion, 1.0);
    }

    #[test]
    fn worked_example_has_distortion_three() {
        let (g, terms, owner) = contraction_example();
        let m = contract_minor(&g, &terms, &owner).unwrap();
        assert_eq!(m.weight(0, 1), Some(3.0));
        assert_eq!(m.weight(1, 3), Some(6.0));
        assert_eq!(m.weight(2, 3), Some(3.0));
        assert_eq!(m.m(), 3);
        let d = distortion(&g, &terms, &m);
        assert_eq!(d.distortion, 3.0);
        assert_eq!(d.pair, (0, 2));
        assert!(d.dominating);
    }

    #[test]
    fn disconnected_fiber_is_rejected() {
        let (g, terms, mut owner) = contraction_example();
        owner[4] = 2; // a joins t3 while b belongs to t4
        assert!(matches!(contract_minor(&g, &terms, &owner), Err(Error::DisconnectedFiber(2))));
    }

    #[test]
    fn terminal_list_parsing() {
        assert_eq!(SprInstance::parse_terminals("1, 4\n7 # tail\n").unwrap(), vec![1, 4, 7]);
        assert!(SprInstance::parse_terminals("x").is_err());
    }

    #[test]
    fn level_bound_fails_with_too_small_tau() {
        // A long pendant path hangs off one terminal; every round with a
        // partition of several clusters along the path needs levels above 1.
        let mut found = false;
        for seed in 0..40 {
            let g = gen::random_tree(60, 1, seed);
            let inst = SprInstance::new(g, gen::random_terminals(60, 2, seed)).unwrap();
            let sol = solve_spr(&inst, &TreeScheme, SprOptions::default()).unwrap();
            let tau = effective_tau(&TreeScheme, 60);
            assert!(assignment_diagnostics(&inst, &sol, tau).ok);
            if !assignment_diagnostics(&inst, &sol, 1).ok {
                found = true;
            }
        }
        assert!(found);
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn trees_and_cacti_solutions_are_valid(seed in 0u64..10_000, n in 2usize..50, k in 1usize..8, cactus in any::<bool>()) {
            let k = k.min(n);
            let g = if cactus { gen::random_cactus(n, 3, seed) } else { gen::random_tree(n, 4, seed) };
            let scheme: &dyn ScatteringScheme = if cactus { &CactusScheme } else { &TreeScheme };
            let inst = SprInstance::new(g, gen::random_terminals(n, k, seed)).unwrap();
            let sol = solve_spr(&inst, scheme, SprOptions::default()).unwrap();
            prop_assert!(sol.distortion.dominating);
            let tau = effective_tau(scheme, n);
            let d = assignment_diagnostics(&inst, &sol, tau);
            prop_assert!(d.ok, "{:?}", d);
            prop_assert!(sol.distortion.distortion <= 64.0 * (tau as f64).powi(3));
        }
    }
}
