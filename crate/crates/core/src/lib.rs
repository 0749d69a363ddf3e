//! Exact finite computations with categories, simplicial sets, chain
//! complexes over prime fields, Reedy diagrams and frames.

pub mod chain;
pub mod dsub;
pub mod error;
pub mod exec;
pub mod fincat;
pub mod frames;
pub mod gen;
pub mod io;
pub mod linalg;
pub mod reedy;
pub mod sset;
pub mod suites;
pub mod words;

pub use error::{Error, Result};
