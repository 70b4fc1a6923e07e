//! Explicit flat-manifold families.

mod cyclotomic;
mod families;
mod spec;

pub use cyclotomic::{companion, cyclotomic_polynomial};
pub use families::{
    all_double_covers, build_c, build_c3_full, build_c_choice, build_e, build_e_choice, build_ep, build_f,
    build_wtc3, cyclic_cover, double_cover, find_double_cover, hantzsche_wendt, hw_extension, hw_tau,
    mapping_torus, slot_map, CoverData,
};
pub use spec::FamilySpec;
