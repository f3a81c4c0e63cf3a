//! Dowker-complex analysis of binary relations: privacy, inference lattices,
//! homology and strategy spaces.

pub mod bits;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod galois;
pub mod homology;
pub mod infer_lattice;
pub mod io;
pub mod morphism;
pub mod relation;
pub mod strategy;

pub use error::{Error, Result};
pub use relation::{AttributeSet, IndividualSet, Relation};
