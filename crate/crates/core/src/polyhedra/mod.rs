//! Exact rational arithmetic and convex polyhedra given by mixed strict and
//! non-strict inequality systems.

pub mod feasibility;
pub mod linalg;
mod polyhedron;
pub mod rational;

pub use polyhedron::{AffineSubspace, LinearInequality, RationalPolyhedron};
pub(crate) use polyhedron::{parse_poly_block, parse_rat, parse_usize, tokens, Lines};
pub use rational::Rational;
