//! Exact arithmetic for quadratic-form invariants of flat manifolds.

pub mod error;
pub mod bieberbach;
pub mod classify;
pub mod constructions;
pub mod exactnum;
pub mod exec;
pub mod qform;

pub use error::{Error, Result};
