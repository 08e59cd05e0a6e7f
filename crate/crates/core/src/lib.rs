//! Heat diffusion, resolvents and local partitioning on weighted hypergraphs
//! whose potential is a sum of squared, shift-minimized hyperedge norms.

pub mod diffusion;
pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod io;
pub mod laplacian;
pub mod partition;
pub mod potentials;
pub mod resolvent;

pub use error::{Error, Result};
pub use hypergraph::{CliqueScaling, CutProfile, Hypergraph, VertexVector};
pub use potentials::{CutFunction, EdgeNorm, PotentialModel};
