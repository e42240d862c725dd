//! Graph modification to planarity under first-order constraints: graphs,
//! planarity, walls, treewidth, Gaifman logic, wall signatures, and a
//! reduction pipeline checked against a brute-force oracle.

pub mod error;
pub mod graph;
pub mod logic;
pub mod modification;
pub mod planarity;
pub mod signatures;
pub mod solver;
pub mod suites;
pub mod treewidth;
pub mod walls;

pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};
