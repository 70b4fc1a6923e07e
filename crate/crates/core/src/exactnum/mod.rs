//! Exact scalars and the number theory underneath the form invariants.

pub mod factor;
pub mod linalg;
pub mod primeset;
pub mod rational;
pub mod snf;
pub mod squarefree;
pub mod symbols;

pub use factor::{factorize, FactorConfig};
pub use primeset::PrimeSet;
pub use rational::{parse_rational, format_rational, ExactRational};
pub use snf::{lattice_solve, smith_normal_form, smith_normal_form_cols, SmithForm};
pub use squarefree::{squarefree_part, SquarefreeInt};
pub use symbols::{hilbert_symbol, legendre_symbol, padic_is_square, Place};
