//! Series-parallel graphs, their spanning-tree patterns in the hypercube,
//! and the extremal questions they answer.

pub mod constructions;
pub mod embeddings;
pub mod error;
pub mod exec;
pub mod iso;
pub mod multigraph;
pub mod operators;
pub mod patterns;
pub mod search;
pub mod spterm;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use multigraph::{EdgeSubset, MinorMode, Multigraph, Operation, TreeEnumeration};
pub use patterns::{Kind, Pattern, PatternGraph, Word};
pub use spterm::{canonicalize, CanonicalKey, SpTerm};
