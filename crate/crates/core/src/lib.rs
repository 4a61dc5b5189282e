//! Scattering partitions, sparse partitions and sparse covers of weighted
//! graphs, with exact verifiers and a Steiner point removal solver built on
//! top of them.
//!
//! ```
//! use scatterkit::{gen, tree, verify::{verify_scattering, PathMode}};
//!
//! let g = gen::full_binary_tree(4);
//! let t = tree::RootedTree::new(&g, 0).unwrap();
//! let p = tree::tree_scattering_partition(&t, 4.0);
//! let report = verify_scattering(&g, &p, 2.0, 3, 4.0, PathMode::all_paths()).unwrap();
//! assert!(report.ok);
//! ```

pub mod cactus;
pub mod chordal;
pub mod cover;
pub mod doubling;
pub mod error;
pub mod experiments;
pub mod euclid;
pub mod gen;
pub mod general;
pub mod graph;
pub mod metric;
pub mod mpx;
pub mod net;
pub mod partition;
pub mod spd;
pub mod spr;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{parse_graph, write_graph, Edge, WeightedGraph, EPS};
pub use metric::{
    ball, canonical_shortest_path, connected_components, induced_subgraph, shortest_paths, strong_diameter,
    weak_diameter, DistanceMap, Metric, Path,
};
pub use partition::{Partition, SparseCover};
pub use verify::{PathMode, VerificationReport, Verifier, Witness};
