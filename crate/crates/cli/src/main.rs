use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scatterkit::cactus::{cactus_scattering_partition, is_cactus};
use scatterkit::chordal::{build_clique_tree, chordal_scattering_partition};
use scatterkit::cover::{cover_to_partition, kpr_cover, partition_to_cover};
use scatterkit::doubling::{doubling_guarantee, doubling_strong_partition, estimate_ddim};
use scatterkit::euclid::{segment_cells, verify_grid_scattering, worst_case_segment, EuclideanPoint};
use scatterkit::experiments::{exhaustive_tree_lb, experiment_supersc_lb, experiment_tree_lb, subcube_partition, TreeLbScheme};
use scatterkit::general::{general_padding_gate, general_strong_partition};
use scatterkit::mpx::{mpx_cluster, ShiftAssignment};
use scatterkit::spd::{build_spd, spd_strong_params, spd_strong_partition, spd_weak_partition, validate_spd, SpdHierarchy, SpdStrategy};
use scatterkit::spr::{
    assignment_diagnostics, effective_tau, solve_spr, CactusScheme, ChordalScheme, GeneralScheme, ScatteringScheme, SprInstance,
    SprOptions, TreeScheme,
};
use scatterkit::tree::{is_tree, tree_scattering_partition, tree_weak_partition, RootedTree};
use scatterkit::{gen, parse_graph, write_graph, Partition, PathMode, SparseCover, VerificationReport, Verifier, WeightedGraph};

#[derive(Parser)]
#[command(name = "scatterkit", version, about = "Scattering and sparse graph partitions, sparse covers and Steiner point removal")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Skip the automatic verification of produced objects.
    #[arg(long, global = true)]
    no_verify: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    Gen(GenArgs),
    /// Partition a graph with one of the schemes.
    Partition(PartitionArgs),
    /// Check a partition or cover against (σ, τ, Δ).
    Verify(VerifyArgs),
    /// Convert between partitions and covers.
    Convert(ConvertArgs),
    /// Build a sparse cover.
    Cover(CoverArgs),
    /// Shortest-path decompositions.
    Spd(SpdArgs),
    /// Contract Steiner vertices into terminals.
    Spr(SprArgs),
    /// Grid partitions of Euclidean space.
    Euclid(EuclidArgs),
    /// Lower-bound measurements.
    Experiment(ExperimentArgs),
    /// Recognize a graph class.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Star,
    Grid,
    Hypercube,
    FullAryTree,
    FullBinaryTree,
    RandomTree,
    Gnp,
    Ktree,
    Cactus,
    Planar,
    Regular,
    Terminals,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Dimension, arity or tree-width depending on the family.
    #[arg(long, short = 'd', default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 4)]
    width: usize,
    #[arg(long, default_value_t = 4)]
    height: usize,
    /// Number of terminals.
    #[arg(long, short = 'k', default_value_t = 4)]
    k: usize,
    #[arg(long, short = 'p', default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    max_weight: u32,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    TreeScatter,
    TreeWeak,
    Chordal,
    Cactus,
    General,
    Doubling,
    Mpx,
    SpdStrong,
    SpdWeak,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    scheme: Scheme,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Doubling dimension; estimated heuristically when absent.
    #[arg(long)]
    ddim: Option<f64>,
    /// Shift file for `mpx`.
    #[arg(long)]
    shifts: Option<PathBuf>,
    /// Hierarchy file for the SPD schemes; built when absent.
    #[arg(long)]
    spd: Option<PathBuf>,
    /// Net spacing for `spd-weak` (default Δ/4).
    #[arg(long)]
    spacing: Option<f64>,
    /// Check every shortest path, not only the canonical ones.
    #[arg(long)]
    all_paths: bool,
    /// Write the realized shifts of `general` or `doubling` here.
    #[arg(long)]
    dump_shifts: Option<PathBuf>,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Scattering,
    Weak,
    Strong,
    Cover,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    kind: Kind,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    partition: Option<PathBuf>,
    #[arg(long)]
    cover: Option<PathBuf>,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    tau: usize,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    all_paths: bool,
    /// Cover clusters are measured by strong diameter.
    #[arg(long)]
    strong: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    CoverToPartition,
    PartitionToCover,
}

#[derive(Args)]
struct ConvertArgs {
    direction: Direction,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    input: PathBuf,
    /// Padding parameter of the input partition.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Sparsity of the input partition, for verifying the output.
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverKind {
    Kpr,
}

#[derive(Args)]
struct CoverArgs {
    kind: CoverKind,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, short = 'r', default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpdAction {
    Build,
    Validate,
    Partition,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpdKind {
    Strong,
    Weak,
}

#[derive(Args)]
struct SpdArgs {
    action: SpdAction,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    spd: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, value_enum, default_value_t = SpdKind::Weak)]
    kind: SpdKind,
    #[arg(long)]
    spacing: Option<f64>,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum SprScheme {
    Tree,
    Chordal,
    Cactus,
    General,
}

#[derive(Args)]
struct SprArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    terminals: PathBuf,
    #[arg(long)]
    scheme: SprScheme,
    /// τ used by the diagnostics; defaults to the scheme's own value.
    #[arg(long)]
    tau: Option<usize>,
    /// Write the terminal assignment as JSON here.
    #[arg(long)]
    assignment: Option<PathBuf>,
    /// Destination of the minor in graph text format.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum EuclidAction {
    Cells,
    Check,
    Worst,
}

#[derive(Args)]
struct EuclidArgs {
    action: EuclidAction,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Cell diameter; `worst` uses √dim.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    to: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    TreeLb,
    Supersc,
}

#[derive(Clone, Copy, ValueEnum)]
enum LbScheme {
    Scatter,
    Weak,
}

#[derive(Args)]
struct ExperimentArgs {
    kind: ExperimentKind,
    #[arg(long, short = 'd', default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = LbScheme::Scatter)]
    scheme: LbScheme,
    /// Search every connected partition (small trees only).
    #[arg(long)]
    exhaustive: bool,
    /// Path length for `supersc`.
    #[arg(long, short = 'k', default_value_t = 2)]
    k: usize,
    /// Free bits per subcube for `supersc`.
    #[arg(long, default_value_t = 2)]
    free: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Chordal,
    Cactus,
    Tree,
}

#[derive(Args)]
struct CheckArgs {
    class: Class,
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    common: Common,
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SCATTERKIT_THREADS") {
        let n: usize = v.parse().with_context(|| format!("SCATTERKIT_THREADS must be a number, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cmd: Command) -> Result<Status> {
    match cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Partition(a) => cmd_partition(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Cover(a) => cmd_cover(a),
        Command::Spd(a) => cmd_spd(a),
        Command::Spr(a) => cmd_spr(a),
        Command::Euclid(a) => cmd_euclid(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Check(a) => cmd_check(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<WeightedGraph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Writes `text` to `out`, or to stdout when `out` is absent.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn to_value(text: &str) -> Value {
    serde_json::from_str(text).expect("internal JSON is valid")
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

/// Prints a human summary of a report on stderr.
fn summarize(what: &str, r: &VerificationReport) {
    if r.ok {
        eprintln!(
            "{what}: ok (σ = {}, τ = {} measured {}, Δ = {} measured {})",
            r.sigma, r.tau, r.measured_tau, r.delta, r.measured_diameter
        );
    } else {
        eprintln!("{what}: FAILED");
        for f in &r.failures {
            eprintln!("  {f}");
        }
        eprintln!("  τ witness: {:?}", r.tau_witness);
        eprintln!("  diameter witness: {:?}", r.diameter_witness);
    }
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn cmd_gen(a: GenArgs) -> Result<Status> {
    let seed = a.common.seed;
    if let Family::Terminals = a.family {
        if a.k == 0 || a.k > a.n {
            bail!("need 1 <= k <= n");
        }
        let t = gen::random_terminals(a.n, a.k, seed);
        let text: Vec<String> = t.iter().map(|v| v.to_string()).collect();
        emit(a.output.as_deref(), &(text.join("\n") + "\n"))?;
        return Ok(Status::Ok);
    }
    let g = match a.family {
        Family::Path => gen::path(a.n),
        Family::Cycle => gen::cycle(a.n),
        Family::Star => gen::star(a.n),
        Family::Grid => gen::grid(a.width, a.height),
        Family::Hypercube => gen::hypercube(a.d),
        Family::FullAryTree => gen::full_ary_tree(a.d, a.depth),
        Family::FullBinaryTree => gen::full_binary_tree(a.depth),
        Family::RandomTree => gen::random_tree(a.n, a.max_weight, seed),
        Family::Gnp => gen::random_connected_gnp(a.n, a.p, seed),
        Family::Ktree => gen::random_ktree(a.n, a.d, seed),
        Family::Cactus => gen::random_cactus(a.n, a.max_weight, seed),
        Family::Planar => gen::random_planar(a.n, seed),
        Family::Regular => gen::random_regular(a.n, a.d, seed),
        Family::Terminals => unreachable!("handled above"),
    };
    emit(a.output.as_deref(), &write_graph(&g))?;
    Ok(Status::Ok)
}

fn load_or_build_spd(g: &WeightedGraph, path: Option<&Path>) -> Result<SpdHierarchy> {
    match path {
        Some(p) => {
            let spd = SpdHierarchy::parse(&read(p)?)?;
            validate_spd(g, &spd)?;
            Ok(spd)
        }
        None => Ok(build_spd(g, &SpdStrategy::ExtremePair)?),
    }
}

/// Verification a partition must pass.
type Check = Box<dyn Fn(&Verifier, &Partition) -> Result<VerificationReport>>;

fn cmd_partition(a: PartitionArgs) -> Result<Status> {
    let g = load_graph(&a.graph)?;
    let delta = a.delta;
    if !(delta > 0.0) {
        bail!("--delta must be positive");
    }
    let mode = if a.all_paths { PathMode::all_paths() } else { PathMode::Canonical };
    let seed = a.common.seed;
    let mut shifts_out = None;
    // The partition and the check it must pass.
    let (p, check): (Partition, Check) = match a.scheme {
        Scheme::TreeScatter => {
            let p = tree_scattering_partition(&RootedTree::new(&g, 0)?, delta);
            (p, Box::new(move |v, p| Ok(v.verify_scattering(p, 2.0, 3, delta, mode)?)))
        }
        Scheme::TreeWeak => {
            let p = tree_weak_partition(&RootedTree::new(&g, 0)?, delta);
            (p, Box::new(move |v, p| Ok(v.verify_weak_sparse(p, 4.0, 3, delta)?)))
        }
        Scheme::Chordal => {
            let p = chordal_scattering_partition(&g, delta)?;
            (p, Box::new(move |v, p| Ok(v.verify_scattering(p, 2.0, 3, delta, mode)?)))
        }
        Scheme::Cactus => {
            let p = cactus_scattering_partition(&g, delta)?;
            (p, Box::new(move |v, p| Ok(v.verify_scattering(p, 4.0, 5, delta, mode)?)))
        }
        Scheme::General => {
            let out = general_strong_partition(&g, delta, seed)?;
            shifts_out = Some(out.shifts.write());
            let (alpha, _, bound) = general_padding_gate(g.n().max(2), delta);
            let tau = bound.floor() as usize;
            (out.partition, Box::new(move |v, p| Ok(v.verify_strong_sparse(p, 8.0 * alpha, tau, delta)?)))
        }
        Scheme::Doubling => {
            let ddim = match a.ddim {
                Some(d) => d,
                None => {
                    let d = estimate_ddim(&g);
                    eprintln!("heuristic doubling dimension estimate: {d:.3}");
                    d
                }
            };
            let out = doubling_strong_partition(&g, delta, ddim, seed, None)?;
            shifts_out = Some(out.shifts.write());
            let (sigma, tau, diam) = doubling_guarantee(&out.constants, delta);
            (out.partition, Box::new(move |v, p| Ok(v.verify_strong_sparse(p, sigma, tau, diam)?)))
        }
        Scheme::Mpx => {
            let path = a.shifts.as_deref().context("--scheme mpx needs --shifts")?;
            let shifts = ShiftAssignment::parse(&read(path)?)?;
            let p = mpx_cluster(&g, &shifts)?;
            let (n, d) = (g.n(), p.delta());
            (p, Box::new(move |v, p| Ok(v.verify_strong_sparse(p, 1.0, n, d)?)))
        }
        Scheme::SpdStrong => {
            let spd = load_or_build_spd(&g, a.spd.as_deref())?;
            let rho = spd.depth();
            let p = spd_strong_partition(&g, &spd, delta)?;
            let (sigma, tau, diam) = spd_strong_params(rho, delta);
            (p, Box::new(move |v, p| Ok(v.verify_strong_sparse(p, sigma, tau, diam)?)))
        }
        Scheme::SpdWeak => {
            let spd = load_or_build_spd(&g, a.spd.as_deref())?;
            let rho = spd.depth();
            let p = spd_weak_partition(&g, &spd, delta, a.spacing.unwrap_or(delta / 4.0))?;
            (p, Box::new(move |v, p| Ok(v.verify_weak_sparse(p, 8.0, 5 * rho, delta)?)))
        }
    };
    if let (Some(path), Some(text)) = (a.dump_shifts.as_deref(), shifts_out) {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let report = if a.common.no_verify { None } else { Some(check(&Verifier::new(&g), &p)?) };
    let ok = report.as_ref().is_none_or(|r| r.ok);
    if a.common.json {
        if let Some(out) = a.output.as_deref() {
            emit(Some(out), &p.to_json())?;
            print_json(&json!({ "verification": report }));
        } else {
            print_json(&json!({ "partition": to_value(&p.to_json()), "verification": report }));
        }
    } else {
        emit(a.output.as_deref(), &p.to_json())?;
        if let Some(r) = &report {
            summarize("verification", r);
        }
    }
    Ok(status(ok))
}

fn cmd_verify(a: VerifyArgs) -> Result<Status> {
    let g = load_graph(&a.graph)?;
    let v = Verifier::new(&g);
    let report = match a.kind {
        Kind::Cover => {
            let path = a.cover.as_deref().context("--kind cover needs --cover")?;
            let cover = SparseCover::from_json(&read(path)?)?;
            v.verify_cover(&cover, a.sigma, a.tau, a.delta, a.strong)?
        }
        kind => {
            let path = a.partition.as_deref().context("this kind needs --partition")?;
            let p = Partition::from_json(&read(path)?, g.n())?;
            match kind {
                Kind::Scattering => {
                    let mode = if a.all_paths { PathMode::all_paths() } else { PathMode::Canonical };
                    v.verify_scattering(&p, a.sigma, a.tau, a.delta, mode)?
                }
                Kind::Weak => v.verify_weak_sparse(&p, a.sigma, a.tau, a.delta)?,
                _ => v.verify_strong_sparse(&p, a.sigma, a.tau, a.delta)?,
            }
        }
    };
    if a.common.json {
        print_json(&serde_json::to_value(&report)?);
    } else {
        summarize("verification", &report);
    }
    Ok(status(report.ok))
}

fn cmd_convert(a: ConvertArgs) -> Result<Status> {
    let g = load_graph(&a.graph)?;
    let text = read(&a.input)?;
    let v = Verifier::new(&g);
    let (out, report) = match a.direction {
        Direction::CoverToPartition => {
            let cover = SparseCover::from_json(&text)?;
            let p = cover_to_partition(&g, &cover)?;
            let tau = a.tau.unwrap_or_else(|| cover.overlap(g.n()));
            let r = (!a.common.no_verify).then(|| v.verify_weak_sparse(&p, cover.sigma, tau, cover.delta)).transpose()?;
            (p.to_json(), r)
        }
        Direction::PartitionToCover => {
            let p = Partition::from_json(&text, g.n())?;
            let cover = partition_to_cover(&g, &p, a.sigma);
            let tau = match a.tau {
                Some(t) => t,
                None => v.measure_balls(&p, p.delta() / a.sigma).0,
            };
            let r = (!a.common.no_verify).then(|| v.verify_cover(&cover, cover.sigma, tau, cover.delta, false)).transpose()?;
            (cover.to_json(g.n()), r)
        }
    };
    finish_artifact(&a.common, a.output.as_deref(), &out, report)
}

/// Shared tail of commands producing one JSON artifact plus an optional
/// verification report.
fn finish_artifact(common: &Common, output: Option<&Path>, artifact: &str, report: Option<VerificationReport>) -> Result<Status> {
    let ok = report.as_ref().is_none_or(|r| r.ok);
    if common.json && output.is_none() {
        print_json(&json!({ "result": to_value(artifact), "verification": report }));
    } else {
        emit(output, artifact)?;
        if common.json {
            print_json(&json!({ "verification": report }));
        } else if let Some(r) = &report {
            summarize("verification", r);
        }
    }
    Ok(status(ok))
}

fn cmd_cover(a: CoverArgs) -> Result<Status> {
    let g = load_graph(&a.graph)?;
    match a.kind {
        CoverKind::Kpr => {
            let k = kpr_cover(&g, a.r, a.delta, a.c)?;
            let report = if a.common.no_verify {
                None
            } else {
                let d = k.measured_weak_diameter.max(f64::MIN_POSITIVE);
                Some(Verifier::new(&g).verify_cover(&k.cover, d / k.padding_radius, 1 << a.r, d, false)?)
            };
            eprintln!(
                "kpr: {} partitions, width {}, padding radius {}, measured weak diameter {}",
                k.partitions.len(),
                k.width,
                k.padding_radius,
                k.measured_weak_diameter
            );
            finish_artifact(&a.common, a.output.as_deref(), &k.cover.to_json(g.n()), report)
        }
    }
}

fn cmd_spd(a: SpdArgs) -> Result<Status> {
    let g = load_graph(&a.graph)?;
    match a.action {
        SpdAction::Build => {
            let spd = build_spd(&g, &SpdStrategy::ExtremePair)?;
            eprintln!("depth {}", spd.depth());
            emit(a.output.as_deref(), &spd.write())?;
            Ok(Status::Ok)
        }
        SpdAction::Validate => {
            let path = a.spd.as_deref().context("validate needs --spd")?;
            let spd = SpdHierarchy::parse(&read(path)?)?;
            match validate_spd(&g, &spd) {
                Ok(()) => {
                    if a.common.json {
                        print_json(&json!({ "valid": true, "depth": spd.depth() }));
                    } else {
                        eprintln!("valid, depth {}", spd.depth());
                    }
                    Ok(Status::Ok)
                }
                Err(e) => {
                    if a.common.json {
                        print_json(&json!({ "valid": false, "error": e.to_string() }));
                    } else {
                        eprintln!("invalid: {e}");
                    }
                    Ok(Status::Failed)
                }
            }
        }
        SpdAction::Partition => {
            let spd = load_or_build_spd(&g, a.spd.as_deref())?;
            let rho = spd.depth();
            let v = Verifier::new(&g);
            let verify = !a.common.no_verify;
            let (p, report) = match a.kind {
                SpdKind::Strong => {
                    let p = spd_strong_partition(&g, &spd, a.delta)?;
                    let (s, t, d) = spd_strong_params(rho, a.delta);
                    let r = verify.then(|| v.verify_strong_sparse(&p, s, t, d)).transpose()?;
                    (p, r)
                }
                SpdKind::Weak => {
                    let p = spd_weak_partition(&g, &spd, a.delta, a.spacing.unwrap_or(a.delta / 4.0))?;
                    let r = verify.then(|| v.verify_weak_sparse(&p, 8.0, 5 * rho, a.delta)).transpose()?;
                    (p, r)
                }
            };
            finish_artifact(&a.common, a.output.as_deref(), &p.to_json(), report)
        }
    }
}

fn cmd_spr(a: SprArgs) -> Result<Status> {
    let g = load_graph(&a.graph)?;
    let terminals = SprInstance::parse_terminals(&read(&a.terminals)?)?;
    let inst = SprInstance::new(g, terminals)?;
    let general = GeneralScheme { seed: a.common.seed };
    let scheme: &dyn ScatteringScheme = match a.scheme {
        SprScheme::Tree => &TreeScheme,
        SprScheme::Chordal => &ChordalScheme,
        SprScheme::Cactus => &CactusScheme,
        SprScheme::General => &general,
    };
    let sol = solve_spr(&inst, scheme, SprOptions { check_scheme: !a.common.no_verify })?;
    let tau = a.tau.unwrap_or_else(|| effective_tau(scheme, inst.graph.n()));
    let diag = (!a.common.no_verify).then(|| assignment_diagnostics(&inst, &sol, tau));
    let assignment = json!({
        "terminals": sol.terminals,
        "owner": sol.assignment.owner,
        "iteration": sol.assignment.iteration,
    });
    if let Some(path) = a.assignment.as_deref() {
        fs::write(path, serde_json::to_string_pretty(&assignment)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let minor = write_graph(&sol.minor);
    if a.common.json {
        if let Some(out) = a.output.as_deref() {
            emit(Some(out), &minor)?;
        }
        print_json(&json!({
            "assignment": assignment,
            "distortion": sol.distortion,
            "rounds": sol.rounds,
            "diagnostics": diag,
            "minor": if a.output.is_none() { Value::String(minor) } else { Value::Null },
        }));
    } else {
        emit(a.output.as_deref(), &minor)?;
        let d = &sol.distortion;
        eprintln!("distortion {} between terminals {} and {}", d.distortion, d.pair.0, d.pair.1);
        if let Some(diag) = &diag {
            if diag.ok {
                eprintln!("diagnostics with τ = {tau}: ok");
            } else {
                eprintln!("diagnostics with τ = {tau}: FAILED");
                for f in &diag.failures {
                    eprintln!("  {f}");
                }
            }
        }
    }
    Ok(status(diag.is_none_or(|d| d.ok) && sol.distortion.dominating))
}

fn parse_point(s: Option<&str>, dim: usize, flag: &str) -> Result<EuclideanPoint> {
    let s = s.with_context(|| format!("{flag} is required"))?;
    let v: Vec<f64> =
        s.split(',').map(|t| t.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().with_context(|| format!("bad {flag}"))?;
    if v.len() != dim {
        bail!("{flag} has {} coordinates, expected {dim}", v.len());
    }
    Ok(EuclideanPoint(v))
}

fn cmd_euclid(a: EuclidArgs) -> Result<Status> {
    match a.action {
        EuclidAction::Cells => {
            let from = parse_point(a.from.as_deref(), a.dim, "--from")?;
            let to = parse_point(a.to.as_deref(), a.dim, "--to")?;
            let cells = segment_cells(&from, &to, a.delta)?;
            let within = from.dist(&to) <= a.delta;
            if a.common.json {
                print_json(&json!({ "cells": cells, "count": cells.len(), "bound": 2 * a.dim, "length_within_delta": within }));
            } else {
                for c in &cells {
                    println!("{:?}", c.anchor);
                }
                eprintln!("{} cells, bound {}", cells.len(), 2 * a.dim);
            }
            Ok(status(!within || cells.len() <= 2 * a.dim))
        }
        EuclidAction::Check => {
            let r = verify_grid_scattering(a.dim, a.delta, a.trials, a.common.seed)?;
            if a.common.json {
                print_json(&serde_json::to_value(&r)?);
            } else {
                eprintln!(
                    "d = {}: {} trials, max {} cells (bound {}), {} violations, tight example meets {}",
                    r.dim, r.trials, r.max_cells, r.bound, r.violations, r.worst_case_cells
                );
            }
            Ok(status(r.violations == 0))
        }
        EuclidAction::Worst => {
            let (from, to, delta) = worst_case_segment(a.dim, a.eps);
            let cells = segment_cells(&from, &to, delta)?;
            if a.common.json {
                print_json(&json!({ "from": from.0, "to": to.0, "delta": delta, "count": cells.len(), "cells": cells }));
            } else {
                println!("{} cells for d = {}", cells.len(), a.dim);
            }
            Ok(Status::Ok)
        }
    }
}

fn cmd_experiment(a: ExperimentArgs) -> Result<Status> {
    let (value, ok) = match a.kind {
        ExperimentKind::TreeLb if a.exhaustive => {
            let r = exhaustive_tree_lb(a.d, a.depth)?;
            let ok = r.counterexamples == 0;
            (serde_json::to_value(r)?, ok)
        }
        ExperimentKind::TreeLb => {
            let scheme = match a.scheme {
                LbScheme::Scatter => TreeLbScheme::Scatter,
                LbScheme::Weak => TreeLbScheme::Weak,
            };
            let r = experiment_tree_lb(a.d, a.depth, scheme)?;
            (serde_json::to_value(r)?, true)
        }
        ExperimentKind::Supersc => {
            let p = subcube_partition(a.d, a.free)?;
            let r = experiment_supersc_lb(a.d, a.k, &p, a.trials, a.common.seed)?;
            (serde_json::to_value(r)?, true)
        }
    };
    if a.common.json {
        print_json(&value);
    } else {
        println!("{}", serde_json::to_string(&value)?);
    }
    Ok(status(ok))
}

fn cmd_check(a: CheckArgs) -> Result<Status> {
    let text = read(&a.graph)?;
    let g = scatterkit::graph::parse_graph_unchecked(&text)?;
    let (yes, detail) = match a.class {
        Class::Tree => (is_tree(&g), Value::Null),
        Class::Cactus => (g.is_connected() && is_cactus(&g), Value::Null),
        Class::Chordal => match build_clique_tree(&g) {
            Ok(_) => (true, Value::Null),
            Err(scatterkit::Error::NotChordal { cycle }) => (false, json!({ "chordless_cycle": cycle })),
            Err(e) => return Err(e.into()),
        },
    };
    if a.common.json {
        print_json(&json!({ "member": yes, "witness": detail }));
    } else {
        println!("{}", if yes { "yes" } else { "no" });
        if !detail.is_null() {
            eprintln!("witness: {detail}");
        }
    }
    Ok(status(yes))
}
