//! Construction and numerical verification of finite-dimensional
//! representations of quantum automorphism game algebras, their induced
//! quantum no-signalling correlations, and nonlocal-symmetry certificates.
//!
//! All indices are 0-based in code and files. Human-facing reports shift to
//! 1-based labels.

pub mod correlation;
pub mod error;
pub mod graph;
pub mod hadamard;
pub mod linalg;
pub mod nonlocal;
pub mod report;
pub mod representation;

pub use error::{Error, Result};
pub use graph::{Graph, Permutation};
pub use linalg::{ComplexMatrix, Tolerance};
pub use report::Report;
pub use representation::{BlockBiUnitary, Representation};
