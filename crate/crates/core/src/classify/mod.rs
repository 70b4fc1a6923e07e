//! Holonomy forms of flat manifolds: invariant spaces, sampling, and the
//! projective classes they fall into.

mod report;
mod sample;
mod space;

pub use report::{
    classify_verified, diagonal_label, enumerate_classes, enumerate_classes_with, mapping_torus_fingerprint,
    pair_verdict, target_form_double, target_form_single, twisted_eps, ucc_verdict, ClassEntry, ClassReport,
    ClassifyOptions, PairReport, PairVerdict, RealizationMatch, ResampleCheck, SCHEMA_VERSION,
};
pub use sample::{SAMPLE_FACTOR_CONFIG, sample_holonomy_forms, sample_one, sample_with, Sample, SampleBox};
pub use space::{invariant_form_space, invariant_form_space_of, leading_minors_positive, preserves, InvariantFormSpace};
