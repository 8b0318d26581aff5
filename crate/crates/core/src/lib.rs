//! Exact graph complex homology: enumeration, orientations, boundary
//! matrices and rational ranks.

pub mod canonical;
pub mod complexes;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod moduli;
pub mod orientation;
pub mod ribbon;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{HalfEdgeGraph, Morphism, MorphismKind, SubgraphMask};
pub use orientation::{Orientation, Parity};
pub use ribbon::RibbonStructure;
