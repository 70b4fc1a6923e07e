//! Rational quadratic forms and their equivalence problems.

mod form;
mod invariants;
mod projective;

pub use form::{direct_sum, QuadForm};
pub use invariants::{
    discriminant, form_prime_set, hasse_of_diagonal, hasse_witt, rationally_equivalent, FormFingerprint,
};
pub use projective::{
    projective_fingerprint, projective_scaling, projectively_equivalent, realization_test,
    ProjectiveFingerprint,
};

#[cfg(test)]
mod tests;
