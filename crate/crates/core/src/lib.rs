//! Exact homological algebra for finite-dimensional bound quiver algebras
//! over prime fields.

pub mod algebra;
pub mod approx;
pub mod conditions;
pub mod decompose;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod homology;
pub mod linalg;
pub mod module;
pub mod report;
pub mod rng;
pub mod sample;
pub mod selftest;

pub use algebra::{Arrow, Path, PathAlgebra, Quiver, Relation};
pub use error::{Error, Result};
pub use linalg::{FpMatrix, PrimeField};
pub use module::{Module, ModuleMap, ShortExactSequence};
