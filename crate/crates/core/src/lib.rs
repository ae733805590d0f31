//! Structure entropy of graphs: one- and two-dimensional entropy, coding
//! trees, resistance and security index, the graph families they are studied
//! on, and spectral cross-checks.
//!
//! ```
//! use structure_entropy::{generators, partition_search, entropy};
//!
//! let g = generators::complete_graph(6).unwrap();
//! let (h2, witness) = partition_search::exact_h2(&g).unwrap();
//! let h1 = entropy::h1(&g).unwrap();
//! assert!(h2 < h1);
//! assert!(witness.len() >= 2);
//! ```

pub mod coding_tree;
pub mod entropy;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod io;
pub mod partition;
pub mod partition_search;
pub mod spectral;
pub mod verify;

pub use coding_tree::{CodingTree, ModuleFunction};
pub use entropy::{EntropyReport, Method};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use partition::Partition;
