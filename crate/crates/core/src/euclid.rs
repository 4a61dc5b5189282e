//! Axis-aligned grid partition of `R^d` and segment-cell counting.
//!
//! Cells have side `Δ/√d`, so their diameter is `Δ`. A cell is the
//! half-open box `[k·s, (k+1)·s)` in every coordinate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};

/// A point of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanPoint(pub Vec<f64>);

impl EuclideanPoint {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dist(&self, other: &EuclideanPoint) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

/// Integer cell coordinates together with the cell side length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    pub anchor: Vec<i64>,
    pub scale: f64,
}

/// Cell side for diameter `Δ` in dimension `d`.
pub fn grid_scale(d: usize, delta: f64) -> f64 {
    delta / (d as f64).sqrt()
}

/// The cell containing `x`.
pub fn grid_cell(x: &EuclideanPoint, delta: f64) -> GridCell {
    let scale = grid_scale(x.dim(), delta);
    GridCell { anchor: x.0.iter().map(|&c| (c / scale).floor() as i64).collect(), scale }
}

/// Cells met by the closed segment `[a, b]`, in order along the segment.
///
/// A cell counts when a piece of positive length or an endpoint lies in it;
/// crossings that happen at the same parameter advance all affected
/// coordinates in a single step.
pub fn segment_cells(a: &EuclideanPoint, b: &EuclideanPoint, delta: f64) -> Result<Vec<GridCell>> {
    let d = a.dim();
    if d == 0 || b.dim() != d {
        return Err(Error::InvalidParameter("points must share a positive dimension".into()));
    }
    let scale = grid_scale(d, delta);
    let p: Vec<f64> = a.0.iter().map(|&x| x / scale).collect();
    let q: Vec<f64> = b.0.iter().map(|&x| x / scale).collect();
    // (parameter, coordinate, step)
    let mut events: Vec<(f64, usize, i64)> = Vec::new();
    for i in 0..d {
        let c = q[i] - p[i];
        let (fp, fq) = (p[i].floor() as i64, q[i].floor() as i64);
        if c > 0.0 {
            for k in fp + 1..=fq {
                events.push(((k as f64 - p[i]) / c, i, 1));
            }
        } else if c < 0.0 {
            for k in (fq + 1..=fp).rev() {
                events.push(((k as f64 - p[i]) / c, i, -1));
            }
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut cur: Vec<i64> = p.iter().map(|&x| x.floor() as i64).collect();
    let mut cells = vec![GridCell { anchor: cur.clone(), scale }];
    let mut i = 0;
    while i < events.len() {
        let t = events[i].0;
        let mut j = i;
        while j < events.len() && (events[j].0 - t).abs() <= 1e-12 * t.abs().max(1.0) {
            cur[events[j].1] += events[j].2;
            j += 1;
        }
        cells.push(GridCell { anchor: cur.clone(), scale });
        i = j;
    }
    debug_assert_eq!(cells.last().map(|c| c.anchor.clone()), Some(grid_cell(b, delta).anchor));
    Ok(cells)
}

/// The segment from `(-ε, -2ε, .., -dε)` to `(ε, 1+ε, .., 1+ε)` in unit-side
/// cells (`Δ = √d`), which meets exactly `2d` cells.
pub fn worst_case_segment(d: usize, eps: f64) -> (EuclideanPoint, EuclideanPoint, f64) {
    let a = EuclideanPoint((1..=d).map(|i| -(i as f64) * eps).collect());
    let b = EuclideanPoint((0..d).map(|i| if i == 0 { eps } else { 1.0 + eps }).collect());
    (a, b, (d as f64).sqrt())
}

/// Summary of a randomized segment check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridScatteringReport {
    pub dim: usize,
    pub trials: usize,
    pub max_cells: usize,
    pub bound: usize,
    pub violations: usize,
    /// Cells met by [`worst_case_segment`].
    pub worst_case_cells: usize,
}

/// Draws `trials` segments of length at most `Δ` and counts the cells each
/// meets; every count should be at most `2d`.
pub fn verify_grid_scattering(d: usize, delta: f64, trials: usize, seed: u64) -> Result<GridScatteringReport> {
    if d == 0 || !(delta > 0.0) {
        return Err(Error::InvalidParameter("need d >= 1 and Δ > 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = grid_scale(d, delta);
    let mut max_cells = 0;
    let mut violations = 0;
    for _ in 0..trials {
        let a: Vec<f64> = (0..d).map(|_| rng.random_range(-10.0..10.0) * scale).collect();
        let dir: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let len = if rng.random_bool(0.1) { delta } else { rng.random_range(0.0..=delta) };
        let b: Vec<f64> = a.iter().zip(&dir).map(|(x, u)| x + u / norm * len).collect();
        let (pa, pb) = (EuclideanPoint(a), EuclideanPoint(b));
        // Rounding may push the length a hair past Δ; such draws are skipped.
        if pa.dist(&pb) > delta {
            continue;
        }
        let k = segment_cells(&pa, &pb, delta)?.len();
        max_cells = max_cells.max(k);
        if k > 2 * d {
            violations += 1;
        }
    }
    let (a, b, wd) = worst_case_segment(d, 1e-3);
    let worst_case_cells = segment_cells(&a, &b, wd)?.len();
    Ok(GridScatteringReport { dim: d, trials, max_cells, bound: 2 * d, violations, worst_case_cells })
}

/// Lower bound `(1 + 1/(2σ))^d` on the cluster count of some `Δ/σ`-ball for
/// any weak-diameter-`Δ` partition of `R^d`.
pub fn weak_sparse_lower_bound(d: usize, sigma: f64) -> f64 {
    (1.0 + 1.0 / (2.0 * sigma)).powi(d as i32)
}
