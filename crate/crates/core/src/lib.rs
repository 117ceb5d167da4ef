//! Large-girth spanning subgraphs of regular expanders.
//!
//! A random orientation of the host graph is resampled, Moser–Tardos style,
//! until no short cycle survives and no small connected set loses too much
//! of its boundary. Around that engine sit the exact oracles used to audit
//! it: girth and cycle counts, connected-set enumeration, the normalized
//! Laplacian spectrum, and brute-force Cheeger constants.

pub mod connected;
pub mod cycles;
pub mod error;
pub mod generators;
pub mod graph;
pub mod lll;
pub mod sparsify;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use generators::Seed;
pub use graph::{edge_boundary, Cycle, Graph, VertexSet};
