//! Strong-diameter partitions for graphs of bounded doubling dimension.
//!
//! Centers form a greedy `Δ`-net and receive truncated exponential shifts.
//! Bad local events, evaluated on a finer net, are repaired by resampling
//! the shifts they depend on until none remains.

use crate::error::{Error, Result};
use crate::general::BetailedSampler;
use crate::graph::{WeightedGraph, EPS};
use crate::metric::{ball, Metric};
use crate::mpx::{center_distances, mpx_cluster_with, ShiftAssignment};
use crate::net::greedy_net;
use crate::partition::Partition;

/// Truncation factor: shifts are capped at `C_TOP · Δ`.
pub const C_TOP: f64 = 4.0;

/// Derived constants of the doubling scheme for a given dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublingConstants {
    pub ddim: f64,
    /// `ddim` rounded to an integer, at least one.
    pub dim_int: usize,
    pub s: f64,
    /// The grid `1, 1 + 1/D, .., D`.
    pub alphas: Vec<f64>,
}

impl DoublingConstants {
    pub fn new(ddim: f64) -> Result<Self> {
        if !(ddim > 0.0) || !ddim.is_finite() {
            return Err(Error::InvalidParameter(format!("doubling dimension {ddim} must be positive")));
        }
        let dim_int = (ddim.round() as usize).max(1);
        let inner = 4.0 * std::f64::consts::E * ddim * ddim * (24.0 * C_TOP * ddim).powf(ddim);
        let s = (4.0 * inner.ln()).ceil();
        let d = dim_int as f64;
        let alphas = (0..=(dim_int - 1) * dim_int).map(|j| 1.0 + j as f64 / d).collect();
        Ok(DoublingConstants { ddim, dim_int, s, alphas })
    }

    /// `m_α = 2s · 2^(ddim/α)`.
    pub fn m(&self, alpha: f64) -> f64 {
        2.0 * self.s * 2f64.powf(self.ddim / alpha)
    }

    /// `r_α = (ln 2 / α) Δ`.
    pub fn r(&self, alpha: f64, delta: f64) -> f64 {
        std::f64::consts::LN_2 / alpha * delta
    }
}

/// Result of [`doubling_strong_partition`].
#[derive(Debug, Clone)]
pub struct DoublingOutcome {
    pub partition: Partition,
    /// Truncated shifts on the net.
    pub shifts: ShiftAssignment,
    /// Untruncated draws, one per net point.
    pub raw: Vec<f64>,
    /// Number of local repairs performed.
    pub resamples: usize,
    /// Points on which events were evaluated.
    pub event_points: Vec<usize>,
    pub constants: DoublingConstants,
}

/// Strong-diameter partition with clusters of diameter at most `10Δ` whose
/// balls of radius `r_α/4` meet few clusters. `limit` caps the number of
/// repairs; `None` means ten per net point.
pub fn doubling_strong_partition(
    g: &WeightedGraph,
    delta: f64,
    ddim: f64,
    seed: u64,
    limit: Option<usize>,
) -> Result<DoublingOutcome> {
    g.require_connected()?;
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("Δ must be positive".into()));
    }
    let consts = DoublingConstants::new(ddim)?;
    let net = greedy_net(g, delta);
    let k = net.len();
    let dist = center_distances(g, &net);
    let mut sampler = BetailedSampler::new(delta / ddim, C_TOP * delta, seed)?;
    let mut raw = Vec::with_capacity(k);
    let mut psi = Vec::with_capacity(k);
    for _ in 0..k {
        let (r, v) = sampler.sample_raw();
        raw.push(r);
        psi.push(v);
    }

    let event_points = greedy_net(g, delta / (4.0 * ddim));
    let reach = (C_TOP + 2.0) * delta;
    let vars: Vec<Vec<usize>> = event_points
        .iter()
        .map(|&v| (0..k).filter(|&i| dist[i][v] <= reach + EPS).collect())
        .collect();
    let violated = |e: usize, psi: &[f64]| -> bool {
        let v = event_points[e];
        let mut f: Vec<f64> = vars[e].iter().map(|&i| psi[i] - dist[i][v]).collect();
        f.sort_by(|a, b| b.total_cmp(a));
        consts.alphas.iter().any(|&a| {
            let m = consts.m(a).floor() as usize;
            m < f.len() && f[0] - f[m] <= consts.r(a, delta)
        })
    };
    // Events sharing a variable with event e.
    let dependents: Vec<Vec<usize>> = (0..vars.len())
        .map(|e| (0..vars.len()).filter(|&x| vars[x].iter().any(|i| vars[e].contains(i))).collect())
        .collect();

    let limit = limit.unwrap_or(10 * k);
    let mut bad: Vec<bool> = (0..vars.len()).map(|e| violated(e, &psi)).collect();
    let mut resamples = 0;
    while let Some(e) = bad.iter().position(|&b| b) {
        if resamples >= limit {
            return Err(Error::ResampleLimitExceeded(resamples));
        }
        resamples += 1;
        for &i in &vars[e] {
            let (r, v) = sampler.sample_raw();
            raw[i] = r;
            psi[i] = v;
        }
        for &x in &dependents[e] {
            bad[x] = violated(x, &psi);
        }
    }

    let shifts = ShiftAssignment::new(net.clone(), psi)?;
    let partition = mpx_cluster_with(&shifts, &dist, 10.0 * delta)?;
    Ok(DoublingOutcome { partition, shifts, raw, resamples, event_points, constants: consts })
}

/// `(σ, τ, diameter)` certified by a successful run: every event point
/// keeps a gap above `r_1` between its best and `m_1`-th best center, so a
/// ball of radius `r_1/2` around it meets at most `m_1` clusters; any vertex
/// is within `Δ/(4 ddim)` of an event point.
pub fn doubling_guarantee(consts: &DoublingConstants, delta: f64) -> (f64, usize, f64) {
    let radius = consts.r(1.0, delta) / 2.0 - delta / (4.0 * consts.ddim);
    let diameter = 10.0 * delta;
    (diameter / radius.max(EPS), consts.m(1.0).floor() as usize, diameter)
}

/// Rough doubling dimension: the base-2 log of the largest number of
/// `r/2`-separated points found inside a ball of radius `r`, over every
/// vertex and every radius that is a power of two up to the diameter.
/// Only a heuristic; it may under- or over-estimate.
pub fn estimate_ddim(g: &WeightedGraph) -> f64 {
    let m = Metric::new(g);
    let diam = m.diameter();
    if g.n() <= 1 || diam == 0.0 {
        return 1.0;
    }
    let min = m.min_distance().unwrap_or(1.0).max(EPS);
    let mut best = 1usize;
    let mut r = min;
    while r <= 2.0 * diam {
        for v in 0..g.n() {
            let b = ball(g, v, r);
            let mut pts: Vec<usize> = Vec::new();
            for &u in &b {
                if pts.iter().all(|&p| m.d(p, u) > r / 2.0 + EPS) {
                    pts.push(u);
                }
            }
            best = best.max(pts.len());
        }
        r *= 2.0;
    }
    (best as f64).log2().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::strong_diameter;

    #[test]
    fn constants_for_dimension_two() {
        let c = DoublingConstants::new(2.0).unwrap();
        assert_eq!(c.alphas, vec![1.0, 1.5, 2.0]);
        // Independent evaluation of 4 ln(4e·4·192^2).
        let s = (4.0 * (4.0 * std::f64::consts::E * 4.0 * 192f64.powi(2)).ln()).ceil();
        assert_eq!(c.s, s);
        assert_eq!(c.s, 58.0);
        assert_eq!(c.m(1.0), 2.0 * 58.0 * 4.0);
        let one = DoublingConstants::new(1.0).unwrap();
        assert_eq!(one.alphas, vec![1.0]);
    }

    #[test]
    fn grid_partition_has_bounded_strong_diameter() {
        let g = crate::gen::grid(16, 16);
        for seed in 0..3 {
            let out = doubling_strong_partition(&g, 3.0, 2.0, seed, None).unwrap();
            for c in out.partition.clusters() {
                assert!(strong_diameter(&g, c).unwrap() <= 30.0 + 1e-9);
            }
            for (r, s) in out.raw.iter().zip(&out.shifts.shifts) {
                assert_eq!(*s, r.min(12.0));
            }
            let (sigma, tau, diam) = doubling_guarantee(&out.constants, 3.0);
            let rep = crate::verify::verify_strong_sparse(&g, &out.partition, sigma, tau, diam).unwrap();
            assert!(rep.ok, "{rep:?}");
        }
    }

    #[test]
    fn ddim_estimate_is_small_on_paths_and_grids() {
        let p = crate::gen::path(32);
        assert!(estimate_ddim(&p) <= 2.0);
        let g = crate::gen::grid(8, 8);
        let d = estimate_ddim(&g);
        assert!((1.0..=4.0).contains(&d), "{d}");
    }
}
