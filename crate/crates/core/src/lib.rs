//! Network robustness by attack simulation, and a spatial-pyramid-pooling
//! CNN that predicts robustness curves from adjacency matrices of any size.

pub mod cli;
pub mod error;
pub mod graph;
pub mod io;
pub mod model;
pub mod netgen;
pub mod sim;
pub mod stats;
pub mod tensor;

pub use error::{Error, Result};
pub use graph::{AdjacencyMatrix, ComponentPartition, Graph, NodeId};
