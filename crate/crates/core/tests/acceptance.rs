//! End-to-end acceptance suite. Runs every criterion in order, prints one
//! PASS/FAIL line each and exits non-zero if any failed.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use scatterkit::cactus::cactus_scattering_partition;
use scatterkit::chordal::chordal_scattering_partition;
use scatterkit::cover::{kpr_cover, partition_to_cover};
use scatterkit::euclid::{segment_cells, verify_grid_scattering, worst_case_segment};
use scatterkit::experiments::exhaustive_tree_lb;
use scatterkit::general::{general_padding_gate, general_strong_partition, ExponentialSampler};
use scatterkit::mpx::{check_mpx_intersection_property, check_mpx_path_property, mpx_cluster, ShiftAssignment};
use scatterkit::spd::{build_spd, spd_strong_params, spd_strong_partition, spd_weak_partition, SpdStrategy};
use scatterkit::spr::{
    assignment_diagnostics, contract_minor, contraction_example, distortion, effective_tau, solve_spr, CactusScheme, ChordalScheme,
    ScatteringScheme, SprInstance, SprOptions, TreeScheme,
};
use scatterkit::tree::{tree_scattering_partition, tree_weak_partition, RootedTree};
use scatterkit::{gen, strong_diameter, Partition, PathMode, Verifier, WeightedGraph};

/// A partition kept for the conversion criterion, with the `σ` it was
/// checked at and its `τ` (`None`: measure the ball count instead).
struct Kept {
    label: String,
    p: Partition,
    delta: f64,
    sigma: f64,
    tau: Option<usize>,
}

#[derive(Default)]
struct Store {
    groups: Vec<(Arc<WeightedGraph>, Vec<Kept>)>,
}

impl Store {
    fn add(&mut self, g: &Arc<WeightedGraph>, label: String, p: Partition, delta: f64, sigma: f64, tau: Option<usize>) {
        if self.groups.last().is_none_or(|(h, _)| !Arc::ptr_eq(h, g)) {
            self.groups.push((g.clone(), Vec::new()));
        }
        self.groups.last_mut().expect("just pushed").1.push(Kept { label, p, delta, sigma, tau });
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

/// Floyd-Warshall, kept independent of the library's Dijkstra.
fn apsp(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0.0;
    }
    for e in g.edges() {
        d[e.u][e.v] = d[e.u][e.v].min(e.w);
        d[e.v][e.u] = d[e.v][e.u].min(e.w);
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let x = dik + d[k][j];
                if x < d[i][j] {
                    d[i][j] = x;
                }
            }
        }
    }
    d
}

/// Whether `set` induces a connected subgraph, by a plain stack search.
fn induces_connected(g: &WeightedGraph, set: &[usize]) -> bool {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    let mut seen = vec![false; g.n()];
    let mut stack = vec![set[0]];
    seen[set[0]] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(u, _) in g.neighbors(v) {
            if inside[u] && !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == set.len()
}

fn c1_binary_tree(store: &mut Store) -> Outcome {
    let g = Arc::new(gen::full_binary_tree(7));
    let t = RootedTree::new(&g, 0).unwrap();
    let v = Verifier::new(&g);
    let ps = tree_scattering_partition(&t, 6.0);
    let rs = v.verify_scattering(&ps, 2.0, 3, 6.0, PathMode::all_paths()).unwrap();
    let pw = tree_weak_partition(&t, 8.0);
    let rw = v.verify_weak_sparse(&pw, 4.0, 3, 8.0).unwrap();
    let detail = format!(
        "n = {}, scattering τ {} diam {}, weak τ {} diam {}",
        g.n(),
        rs.measured_tau,
        rs.measured_diameter,
        rw.measured_tau,
        rw.measured_diameter
    );
    store.add(&g, "fbt7 scatter".into(), ps, 6.0, 2.0, None);
    store.add(&g, "fbt7 weak".into(), pw, 8.0, 4.0, Some(3));
    outcome(rs.ok && rw.ok, detail)
}

fn c2_random_trees(store: &mut Store) -> Outcome {
    let mut failures = 0;
    let mut runs = 0;
    for seed in 0..100u64 {
        let n = 2 + (seed as usize * 131) % 299;
        let g = Arc::new(gen::random_tree(n, 5, seed));
        let t = RootedTree::new(&g, (seed as usize * 7) % n).unwrap();
        let v = Verifier::new(&g);
        for delta in [2.0, 5.0, 10.0, 20.0, 50.0] {
            let ps = tree_scattering_partition(&t, delta);
            let pw = tree_weak_partition(&t, delta);
            if !v.verify_scattering(&ps, 2.0, 3, delta, PathMode::Canonical).unwrap().ok {
                failures += 1;
            }
            if !v.verify_weak_sparse(&pw, 4.0, 3, delta).unwrap().ok {
                failures += 1;
            }
            runs += 2;
            store.add(&g, format!("tree {seed} Δ={delta} scatter"), ps, delta, 2.0, None);
            store.add(&g, format!("tree {seed} Δ={delta} weak"), pw, delta, 4.0, Some(3));
        }
    }
    outcome(failures == 0, format!("{runs} verifications, {failures} failures"))
}

fn c3_chordal(store: &mut Store) -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    let mut worst = 0;
    for seed in 0..50u64 {
        let k = 1 + seed as usize % 4;
        let n = 10 + (seed as usize * 37) % 91;
        let g = Arc::new(gen::random_ktree(n, k, seed));
        let v = Verifier::new(&g);
        for delta in 3..=10 {
            let delta = delta as f64;
            let p = chordal_scattering_partition(&g, delta).unwrap();
            let r = v.verify_scattering(&p, 2.0, 3, delta, PathMode::all_paths()).unwrap();
            worst = worst.max(r.measured_tau);
            runs += 1;
            if !r.ok {
                failures.push(format!("seed {seed} Δ {delta}: {:?}", r.failures));
            }
            store.add(&g, format!("ktree {seed} Δ={delta}"), p, delta, 2.0, None);
        }
    }
    let first = failures.first().cloned().unwrap_or_default();
    outcome(failures.is_empty(), format!("{runs} partitions, worst path τ {worst}, {} failures {first}", failures.len()))
}

fn c4_cactus(store: &mut Store) -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for seed in 0..50u64 {
        let n = 5 + (seed as usize * 53) % 96;
        let g = Arc::new(gen::random_cactus(n, 3, seed));
        let v = Verifier::new(&g);
        for delta in [2.0, 4.0, 7.0, 12.0, 20.0] {
            let p = cactus_scattering_partition(&g, delta).unwrap();
            let r = v.verify_scattering(&p, 4.0, 5, delta, PathMode::all_paths()).unwrap();
            let strong = p.clusters().iter().map(|c| strong_diameter(&g, c).unwrap()).fold(0.0, f64::max);
            runs += 1;
            if !r.ok || strong > delta + 1e-9 {
                failures.push(format!("seed {seed} Δ {delta}: strong {strong} {:?}", r.failures));
            }
            store.add(&g, format!("cactus {seed} Δ={delta}"), p, delta, 4.0, None);
        }
    }
    let first = failures.first().cloned().unwrap_or_default();
    outcome(failures.is_empty(), format!("{runs} partitions, {} failures {first}", failures.len()))
}

fn c5_general(store: &mut Store) -> Outcome {
    let mut diameter_failures = 0;
    let mut pairs = 0;
    let mut within = 0;
    let mut worst: usize = 0;
    for inst in 0..20u64 {
        let g = Arc::new(gen::random_connected_gnp(64, 0.1, inst));
        let v = Verifier::new(&g);
        for (j, delta) in [4.0, 16.0, 48.0, 96.0].into_iter().enumerate() {
            let (alpha, _, bound) = general_padding_gate(64, delta);
            for seed in 0..5u64 {
                let p = general_strong_partition(&g, delta, inst * 1000 + seed).unwrap().partition;
                let r = v.verify_strong_sparse(&p, 8.0 * alpha, bound.floor() as usize, delta).unwrap();
                if r.measured_diameter > delta + 1e-9 {
                    diameter_failures += 1;
                }
                pairs += 1;
                worst = worst.max(r.measured_tau);
                if r.measured_tau as f64 <= bound {
                    within += 1;
                }
                if seed == 0 && j % 2 == 0 {
                    store.add(&g, format!("gnp {inst} Δ={delta}"), p, delta, 8.0 * alpha, None);
                }
            }
        }
    }
    let frac = within as f64 / pairs as f64;
    outcome(
        diameter_failures == 0 && frac >= 0.95,
        format!("{pairs} runs, {diameter_failures} diameter failures, {:.1}% within ball bound, worst ball {worst}", 100.0 * frac),
    )
}

fn c6_spd(store: &mut Store) -> Outcome {
    let instances: Vec<(&str, WeightedGraph, Vec<f64>)> = vec![
        ("path40", gen::path(40), vec![1.0, 2.0, 4.0, 8.0, 16.0]),
        ("grid4", gen::grid(4, 4), vec![1.0, 2.0, 3.0, 5.0, 8.0]),
        ("grid8", gen::grid(8, 8), vec![1.0, 2.0, 4.0, 6.0, 10.0]),
    ];
    let mut failures = Vec::new();
    let mut rhos = Vec::new();
    for (name, g, deltas) in instances {
        let g = Arc::new(g);
        let spd = build_spd(&g, &SpdStrategy::ExtremePair).unwrap();
        let rho = spd.depth();
        rhos.push(format!("{name} ρ={rho}"));
        let v = Verifier::new(&g);
        for delta in deltas {
            let pw = spd_weak_partition(&g, &spd, delta, delta / 4.0).unwrap();
            let rw = v.verify_weak_sparse(&pw, 8.0, 5 * rho, delta).unwrap();
            let ps = spd_strong_partition(&g, &spd, delta).unwrap();
            let (s, t, d) = spd_strong_params(rho, delta);
            let rs = v.verify_strong_sparse(&ps, s, t, d).unwrap();
            if !rw.ok {
                failures.push(format!("{name} weak Δ {delta}: {:?}", rw.failures));
            }
            if !rs.ok {
                failures.push(format!("{name} strong Δ {delta}: {:?}", rs.failures));
            }
            store.add(&g, format!("{name} Δ={delta} spd weak"), pw, delta, 8.0, Some(5 * rho));
            store.add(&g, format!("{name} Δ={delta} spd strong"), ps, d, s, Some(t));
        }
    }
    let first = failures.first().cloned().unwrap_or_default();
    outcome(failures.is_empty(), format!("{}; {} failures {first}", rhos.join(", "), failures.len()))
}

fn c7_euclid(_: &mut Store) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in 2..=6 {
        let (a, b, delta) = worst_case_segment(d, 1e-3);
        let tight = segment_cells(&a, &b, delta).unwrap().len();
        let r = verify_grid_scattering(d, (d as f64).sqrt(), 100_000, d as u64).unwrap();
        ok &= tight == 2 * d && a.dist(&b) <= delta && r.violations == 0 && r.max_cells <= 2 * d;
        parts.push(format!("d={d}: tight {tight}, random max {}", r.max_cells));
    }
    outcome(ok, parts.join("; "))
}

fn c8_conversions(store: &mut Store) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (g, kept) in &store.groups {
        let v = Verifier::new(g);
        for k in kept {
            let p = k.p.clone().with_delta(k.delta);
            let tau = k.tau.unwrap_or_else(|| v.measure_balls(&p, k.delta / k.sigma).0);
            let cover = partition_to_cover(g, &p, k.sigma);
            let r = v.verify_cover(&cover, k.sigma + 2.0, tau, (1.0 + 2.0 / k.sigma) * k.delta, false).unwrap();
            checked += 1;
            if !r.ok {
                failures.push(format!("{}: {:?}", k.label, r.failures));
            }
        }
    }
    let mut kpr = Vec::new();
    for seed in 0..4u64 {
        let g = gen::random_planar(60 + 10 * seed as usize, seed);
        let delta = [5.0, 10.0, 20.0, 10.0][seed as usize];
        let c = kpr_cover(&g, 5, delta, 2.0).unwrap();
        let d = c.measured_weak_diameter;
        let r = Verifier::new(&g).verify_cover(&c.cover, d / c.padding_radius, 32, d, false).unwrap();
        checked += 1;
        if !r.ok || c.partitions.len() != 32 {
            failures.push(format!("kpr planar {seed}: {:?}", r.failures));
        }
        kpr.push(format!("{:.3}/{}", d, r.measured_tau));
    }
    let first = failures.first().cloned().unwrap_or_default();
    outcome(
        failures.is_empty(),
        format!("{checked} covers, {} failures; kpr weak diameter/overlap [{}] {first}", failures.len(), kpr.join(", ")),
    )
}

fn c9_spr(_: &mut Store) -> Outcome {
    let mut failures = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    let mut runs = 0;
    let mut cases: Vec<(&str, WeightedGraph, &dyn ScatteringScheme, u64)> = Vec::new();
    for s in 0..50u64 {
        cases.push(("tree", gen::random_tree(20 + (s as usize * 17) % 81, 4, s), &TreeScheme, s));
    }
    for s in 0..20u64 {
        cases.push(("chordal", gen::random_ktree(15 + (s as usize * 29) % 66, 1 + s as usize % 3, s), &ChordalScheme, s));
    }
    for s in 0..20u64 {
        cases.push(("cactus", gen::random_cactus(15 + (s as usize * 31) % 66, 3, s), &CactusScheme, s));
    }
    for (name, g, scheme, s) in cases {
        let n = g.n();
        let k = 2 + s as usize % 9;
        let inst = SprInstance::new(g, gen::random_terminals(n, k, s + 500)).unwrap();
        let sol = match solve_spr(&inst, scheme, SprOptions::default()) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{name} {s}: {e}"));
                continue;
            }
        };
        runs += 1;
        let owner = &sol.assignment.owner;
        for &t in &inst.terminals {
            let fiber: Vec<usize> = (0..n).filter(|&v| owner[v] == t).collect();
            if owner[t] != t || !induces_connected(&inst.graph, &fiber) {
                failures.push(format!("{name} {s}: fiber of {t} invalid"));
            }
        }
        if owner.iter().any(|o| inst.terminals.binary_search(o).is_err()) {
            failures.push(format!("{name} {s}: owner is not a terminal"));
        }
        let dg = apsp(&inst.graph);
        let dm = apsp(&sol.minor);
        let mut ratio: f64 = 1.0;
        for (i, &a) in inst.terminals.iter().enumerate() {
            for (j, &b) in inst.terminals.iter().enumerate() {
                if i != j {
                    if dm[i][j] < dg[a][b] {
                        failures.push(format!("{name} {s}: minor shortens {a}-{b}"));
                    }
                    ratio = ratio.max(dm[i][j] / dg[a][b]);
                }
            }
        }
        if (ratio - sol.distortion.distortion).abs() > 1e-9 * ratio {
            failures.push(format!("{name} {s}: distortion {} vs oracle {ratio}", sol.distortion.distortion));
        }
        let tau = effective_tau(scheme, n);
        let diag = assignment_diagnostics(&inst, &sol, tau);
        if !diag.ok {
            failures.push(format!("{name} {s}: {:?}", diag.failures));
        }
        let gate = 64.0 * (tau as f64).powi(3);
        worst_ratio = worst_ratio.max(ratio / gate);
        if ratio > gate {
            failures.push(format!("{name} {s}: distortion {ratio} above empirical gate {gate}"));
        }
    }
    let (g, terms, owner) = contraction_example();
    let fig = distortion(&g, &terms, &contract_minor(&g, &terms, &owner).unwrap());
    if fig.distortion != 3.0 || fig.pair != (0, 2) {
        failures.push(format!("worked example distortion {} at {:?}", fig.distortion, fig.pair));
    }
    let first = failures.first().cloned().unwrap_or_default();
    outcome(
        failures.is_empty(),
        format!(
            "{runs} instances, worst distortion / 64τ³ = {worst_ratio:.4} (empirical gate), example distortion {}; {} failures {first}",
            fig.distortion,
            failures.len()
        ),
    )
}

fn c10_lower_bound(_: &mut Store) -> Outcome {
    let r = exhaustive_tree_lb(2, 2).unwrap();
    outcome(
        r.counterexamples == 0 && r.qualifying > 0 && r.min_max_ball >= 3,
        format!("{} connected partitions, {} with diameter < 4, min worst ball {}", r.partitions, r.qualifying, r.min_max_ball),
    )
}

fn c11_mpx(_: &mut Store) -> Outcome {
    let mut failures = Vec::new();
    let mut balls = 0;
    for s in 0..200u64 {
        let n = 2 + (s as usize * 23) % 59;
        let g = match s % 4 {
            0 => gen::random_tree(n, 3, s),
            1 => gen::random_connected_gnp(n, 0.15, s),
            2 => gen::random_cactus(n, 2, s),
            _ => gen::random_planar(n, s),
        };
        let k = 1 + (s as usize * 7) % n;
        let centers = gen::random_terminals(n, k, s);
        let mut sampler = ExponentialSampler::new(1.0 + (s % 5) as f64, s).unwrap();
        let shifts: Vec<f64> = centers.iter().map(|_| sampler.sample()).collect();
        let sa = ShiftAssignment::new(centers, shifts).unwrap();
        let p = mpx_cluster(&g, &sa).unwrap();
        if let Some((v, u)) = check_mpx_path_property(&g, &p).unwrap() {
            failures.push(format!("instance {s}: path from {v} leaves its cluster at {u}"));
        }
        let d = apsp(&g);
        for v in 0..n {
            let mut radii: Vec<f64> = d[v].clone();
            radii.sort_by(f64::total_cmp);
            radii.dedup();
            for r in radii {
                balls += 1;
                if !check_mpx_intersection_property(&g, &sa, &p, v, r).unwrap() {
                    failures.push(format!("instance {s}: ball({v}, {r}) meets a dominated cluster"));
                }
            }
        }
    }
    let first = failures.first().cloned().unwrap_or_default();
    outcome(failures.is_empty(), format!("200 instances, {balls} balls, {} failures {first}", failures.len()))
}

type Criterion = (usize, &'static str, Option<Duration>, fn(&mut Store) -> Outcome);

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 11] = [
        (1, "tree partitions on the depth-7 binary tree", secs(1), c1_binary_tree),
        (2, "tree schemes on 100 random trees", secs(30), c2_random_trees),
        (3, "chordal scattering on 50 k-trees", secs(60), c3_chordal),
        (4, "cactus scattering and strong diameter", secs(60), c4_cactus),
        (5, "general strong partition on G(64, 0.1)", secs(120), c5_general),
        (6, "SPD weak and strong partitions", secs(120), c6_spd),
        (7, "Euclidean grid segments", secs(30), c7_euclid),
        (8, "partition/cover conversions and KPR covers", None, c8_conversions),
        (9, "Steiner point removal end to end", secs(180), c9_spr),
        (10, "exhaustive tree lower bound", secs(300), c10_lower_bound),
        (11, "MPX path and intersection properties", secs(60), c11_mpx),
    ];
    let mut store = Store::default();
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run(&mut store);
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let ok = out.ok && in_time;
        let budget = limit.map(|l| format!(" / {}s", l.as_secs())).unwrap_or_default();
        println!(
            "criterion {id:>2} {} [{:.2}s{budget}] {name}: {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            out.detail
        );
        if !ok {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all 11 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
