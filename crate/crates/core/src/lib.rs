//! Exact rational polyhedral complexes and the constructions built on them:
//! Voronoi and Delaunay complexes, nerves and difference complexes,
//! parasitic intersections of projective spans with a blow-up schedule, and
//! simplicial homology, fundamental groups and dual complexes.

pub mod complex;
pub mod error;
pub mod formats;
pub mod polyhedra;
pub mod projective;
pub mod topology;
pub mod voronoi;

pub use error::{Error, Result};
