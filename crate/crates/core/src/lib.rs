//! Topological subsystem codes from trivalent 3-colorable tessellations.

pub mod builders;
pub mod census;
pub mod gf2;
pub mod homology;
pub mod hypergraph;
pub mod pauli;
pub mod surface_map;
