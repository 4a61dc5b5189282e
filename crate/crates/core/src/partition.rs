//! Partitions, sparse covers and their JSON form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition of `{0, .., n-1}` into non-empty clusters.
///
/// Clusters are stored sorted; `assignment[v]` is the index of the cluster
/// holding `v`.
/// Clusters and optional centers expressed in another graph's ids.
pub type LiftedClusters = (Vec<Vec<usize>>, Option<Vec<usize>>);

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignment: Vec<usize>,
    clusters: Vec<Vec<usize>>,
    centers: Option<Vec<usize>>,
    delta: f64,
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    delta: f64,
    clusters: Vec<Vec<usize>>,
    centers: Option<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from explicit clusters over `n` vertices.
    pub fn from_clusters(n: usize, clusters: Vec<Vec<usize>>, centers: Option<Vec<usize>>, delta: f64) -> Result<Self> {
        let mut assignment = vec![usize::MAX; n];
        let mut sorted = Vec::with_capacity(clusters.len());
        for (i, mut c) in clusters.into_iter().enumerate() {
            if c.is_empty() {
                return Err(Error::NotAPartition(format!("cluster {i} is empty")));
            }
            c.sort_unstable();
            for &v in &c {
                if v >= n {
                    return Err(Error::NotAPartition(format!("vertex {v} out of range")));
                }
                if assignment[v] != usize::MAX {
                    return Err(Error::NotAPartition(format!("vertex {v} appears twice")));
                }
                assignment[v] = i;
            }
            sorted.push(c);
        }
        if let Some(v) = assignment.iter().position(|&a| a == usize::MAX) {
            return Err(Error::NotAPartition(format!("vertex {v} is not covered")));
        }
        if let Some(cs) = &centers {
            if cs.len() != sorted.len() {
                return Err(Error::NotAPartition("one center per cluster expected".into()));
            }
            if let Some(&c) = cs.iter().find(|&&c| c >= n) {
                return Err(Error::NotAPartition(format!("center {c} out of range")));
            }
        }
        Ok(Partition { assignment, clusters: sorted, centers, delta })
    }

    /// Builds a partition from a label per vertex. Clusters are numbered in
    /// order of their smallest vertex.
    pub fn from_labels(labels: &[usize], delta: f64) -> Self {
        let mut index = std::collections::HashMap::new();
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let i = *index.entry(l).or_insert_with(|| {
                clusters.push(Vec::new());
                clusters.len() - 1
            });
            clusters[i].push(v);
        }
        Partition::from_clusters(labels.len(), clusters, None, delta).expect("labels define a partition")
    }

    /// Every vertex in its own cluster.
    pub fn singletons(n: usize, delta: f64) -> Self {
        Partition::from_clusters(n, (0..n).map(|v| vec![v]).collect(), Some((0..n).collect()), delta)
            .expect("singletons form a partition")
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn centers(&self) -> Option<&[usize]> {
        self.centers.as_deref()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    /// Re-expresses the partition in the vertex ids of a larger graph.
    /// `remap[i]` is the id of local vertex `i`; `n` is the larger vertex count.
    /// Vertices not covered by `remap` are left out, so this is only a
    /// partition once all pieces are merged with [`Partition::merge`].
    pub fn lift(&self, remap: &[usize]) -> LiftedClusters {
        let clusters = self.clusters.iter().map(|c| c.iter().map(|&v| remap[v]).collect()).collect();
        let centers = self.centers.as_ref().map(|cs| cs.iter().map(|&c| remap[c]).collect());
        (clusters, centers)
    }

    /// Joins partitions of disjoint vertex sets, given in the ids of the
    /// larger graph, into one partition of `{0, .., n-1}`.
    pub fn merge(n: usize, pieces: Vec<LiftedClusters>, delta: f64) -> Result<Self> {
        let all_centers = pieces.iter().all(|p| p.1.is_some());
        let mut clusters = Vec::new();
        let mut centers = Vec::new();
        for (cl, ce) in pieces {
            clusters.extend(cl);
            if let Some(ce) = ce {
                centers.extend(ce);
            }
        }
        Partition::from_clusters(n, clusters, all_centers.then_some(centers), delta)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PartitionJson {
            delta: self.delta,
            clusters: self.clusters.clone(),
            centers: self.centers.clone(),
        })
        .expect("partition serializes")
    }

    /// Parses the JSON form for a graph with `n` vertices.
    pub fn from_json(text: &str, n: usize) -> Result<Self> {
        let p: PartitionJson =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        Partition::from_clusters(n, p.clusters, p.centers, p.delta)
    }
}

/// A family of possibly overlapping clusters meant to pad every
/// `Δ/σ`-ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseCover {
    pub delta: f64,
    pub sigma: f64,
    pub clusters: Vec<Vec<usize>>,
}

impl SparseCover {
    /// Number of clusters holding each vertex.
    pub fn memberships(&self, n: usize) -> Vec<usize> {
        let mut count = vec![0; n];
        for c in &self.clusters {
            for &v in c {
                count[v] += 1;
            }
        }
        count
    }

    /// Largest number of clusters sharing one vertex.
    pub fn overlap(&self, n: usize) -> usize {
        self.memberships(n).into_iter().max().unwrap_or(0)
    }

    pub fn to_json(&self, n: usize) -> String {
        serde_json::json!({
            "delta": self.delta,
            "sigma": self.sigma,
            "clusters": self.clusters,
            "overlap": self.overlap(n),
        })
        .to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_checks() {
        let p = Partition::from_clusters(4, vec![vec![3, 1], vec![0, 2]], Some(vec![1, 0]), 2.0).unwrap();
        assert_eq!(p.clusters(), &[vec![1, 3], vec![0, 2]]);
        assert_eq!(p.cluster_of(3), 0);
        assert!(Partition::from_clusters(3, vec![vec![0, 1]], None, 1.0).is_err());
        assert!(Partition::from_clusters(2, vec![vec![0, 1], vec![1]], None, 1.0).is_err());
        assert!(Partition::from_clusters(2, vec![vec![0, 1], vec![]], None, 1.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = Partition::from_clusters(3, vec![vec![0], vec![1, 2]], None, 1.5).unwrap();
        let text = p.to_json();
        assert_eq!(text, r#"{"delta":1.5,"clusters":[[0],[1,2]],"centers":null}"#);
        assert_eq!(Partition::from_json(&text, 3).unwrap(), p);
        assert!(Partition::from_json(&text, 4).is_err());
    }

    #[test]
    fn labels_and_merge() {
        let p = Partition::from_labels(&[7, 7, 2, 7], 1.0);
        assert_eq!(p.clusters(), &[vec![0, 1, 3], vec![2]]);
        let q = Partition::merge(4, vec![(vec![vec![0, 2]], Some(vec![0])), (vec![vec![1, 3]], None)], 1.0).unwrap();
        assert!(q.centers().is_none());
    }

    #[test]
    fn cover_overlap() {
        let c = SparseCover { delta: 1.0, sigma: 1.0, clusters: vec![vec![0, 1], vec![1, 2], vec![1]] };
        assert_eq!(c.overlap(3), 3);
        let back = SparseCover::from_json(&c.to_json(3)).unwrap();
        assert_eq!(back, c);
    }
}
