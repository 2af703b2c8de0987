//! Exact homological algebra over a small family of computable rings:
//! Koszul towers, adic and derived completion, and the completeness
//! criteria built on them.

pub mod completion;
pub mod complexes;
pub mod criteria;
pub mod error;
pub mod koszul_tower;
pub mod rings;
pub mod selftest;

pub use error::{Error, Result};
