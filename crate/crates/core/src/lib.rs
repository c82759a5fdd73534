//! Combinatorial dynamical systems in the sense of Forman, built from sampled
//! vector fields.
//!
//! The pipeline: build a cell complex from the sample points
//! ([`builders`]), attach a vector to every cell ([`vectors`]), price every
//! admissible pairing ([`cost`]), solve the matching program exactly
//! ([`solver`]) and analyse the resulting multi-flow ([`dynamics`]).

pub mod builders;
pub mod complex;
pub mod cost;
pub mod datagen;
pub mod dynamics;
pub mod gradient;
pub mod io;
pub mod pipeline;
pub mod solver;
pub mod vectors;
