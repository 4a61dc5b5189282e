//! Conversions between sparse partitions and sparse covers, and a
//! recursive annulus cover.

use crate::error::{Error, Result};
use crate::graph::{WeightedGraph, EPS};
use crate::metric::{connected_components, multi_source_distances, shortest_paths_inside, Metric};
use crate::partition::{Partition, SparseCover};

/// Assigns each vertex to the first cluster containing its `Δ/σ`-ball.
pub fn cover_to_partition(g: &WeightedGraph, cover: &SparseCover) -> Result<Partition> {
    let n = g.n();
    let metric = Metric::new(g);
    let radius = cover.delta / cover.sigma;
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
    let mut labels = Vec::with_capacity(n);
    for v in 0..n {
        let d = &metric.from(v).dist;
        let i = (0..masks.len())
            .find(|&i| masks[i][v] && (0..n).all(|u| d[u] > radius + EPS || masks[i][u]))
            .ok_or(Error::NotACover(v))?;
        labels.push(i);
    }
    // Keep clusters in cover order.
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); cover.clusters.len()];
    for (v, &i) in labels.iter().enumerate() {
        clusters[i].push(v);
    }
    clusters.retain(|c| !c.is_empty());
    Partition::from_clusters(n, clusters, None, cover.delta)
}

/// Grows every cluster by `Δ/σ`. A `(σ, τ, Δ)` weak sparse partition yields
/// a `(σ + 2, τ, (1 + 2/σ)Δ)` cover.
pub fn partition_to_cover(g: &WeightedGraph, p: &Partition, sigma: f64) -> SparseCover {
    let grow = p.delta() / sigma;
    let clusters = p
        .clusters()
        .iter()
        .map(|c| {
            let src: Vec<(usize, f64)> = c.iter().map(|&v| (v, 0.0)).collect();
            let d = multi_source_distances(g, &src);
            (0..g.n()).filter(|&u| d[u] <= grow + EPS).collect()
        })
        .collect();
    SparseCover { delta: (1.0 + 2.0 / sigma) * p.delta(), sigma: sigma + 2.0, clusters }
}

/// Result of [`kpr_cover`].
#[derive(Debug, Clone)]
pub struct KprCover {
    /// Union of all `2^r` partitions; `sigma` is set so that `Δ/σ` is the
    /// padding radius `Δ'/4`.
    pub cover: SparseCover,
    /// Each partition as a list of clusters.
    pub partitions: Vec<Vec<Vec<usize>>>,
    /// Annulus width `Δ' = Δ/(c r²)`.
    pub width: f64,
    pub padding_radius: f64,
    pub measured_weak_diameter: f64,
}

/// Recursive annulus cover: every connected piece is cut into annuli of
/// width `Δ' = Δ/(c·r²)` around its smallest-id vertex, once with offset 0
/// and once with offset `Δ'/2`, and each annulus is split into components.
/// After `r` rounds this gives `2^r` partitions in which every ball of
/// radius `Δ'/4` lies inside a single cluster of at least one partition.
/// The weak diameter is only measured, not guaranteed.
pub fn kpr_cover(g: &WeightedGraph, r: usize, delta: f64, c_kpr: f64) -> Result<KprCover> {
    g.require_connected()?;
    if r == 0 || !(delta > 0.0) || !(c_kpr > 0.0) {
        return Err(Error::InvalidParameter("need r >= 1, Δ > 0 and c > 0".into()));
    }
    let width = delta / (c_kpr * (r * r) as f64);
    let n = g.n();
    // Each entry: the pieces of one partition under construction.
    let mut partitions: Vec<Vec<Vec<usize>>> = vec![vec![(0..n).collect()]];
    for _ in 0..r {
        let mut next = Vec::with_capacity(partitions.len() * 2);
        for pieces in &partitions {
            for offset in [0.0, 0.5] {
                let mut out = Vec::new();
                for piece in pieces {
                    out.extend(annuli(g, piece, width, offset));
                }
                next.push(out);
            }
        }
        partitions = next;
    }
    let metric = Metric::new(g);
    let mut clusters = Vec::new();
    let mut diam: f64 = 0.0;
    for part in &partitions {
        for c in part {
            diam = diam.max(metric.weak_diameter(c));
            clusters.push(c.clone());
        }
    }
    let padding_radius = width / 4.0;
    let cover = SparseCover { delta, sigma: delta / padding_radius, clusters };
    Ok(KprCover { cover, partitions, width, padding_radius, measured_weak_diameter: diam })
}

/// Splits a connected piece into the components of its annuli
/// `[(j - 1 + offset)w, (j + offset)w)` around its smallest vertex.
fn annuli(g: &WeightedGraph, piece: &[usize], width: f64, offset: f64) -> Vec<Vec<usize>> {
    let mut mask = vec![false; g.n()];
    for &v in piece {
        mask[v] = true;
    }
    let root = piece[0];
    let d = shortest_paths_inside(g, root, &mask).dist;
    let mut groups: std::collections::BTreeMap<i64, Vec<usize>> = std::collections::BTreeMap::new();
    for &v in piece {
        let j = (d[v] / width - offset).floor() as i64;
        groups.entry(j).or_default().push(v);
    }
    groups.into_values().flat_map(|s| connected_components(g, &s)).collect()
}
