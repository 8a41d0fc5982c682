//! Monoid resource constrained shortest paths: resource algebras, instance
//! generation, lower bounds, enumeration and blown-up bound refinements.

pub mod algebra;
pub mod bench;
pub mod blowup;
pub mod bounding;
pub mod enumeration;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod rng;
pub mod stochastic;
