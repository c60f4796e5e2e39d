//! Toric NCCR construction for lattice polygons.

pub mod fixtures;
pub mod hj;
pub mod induction;
pub mod io;
pub mod lattice;
pub mod pipeline;
pub mod render;
pub mod triangulate;
pub mod verify;
pub mod weights;
