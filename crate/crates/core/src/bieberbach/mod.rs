//! Flat manifolds as free quotients of tori by finite groups of affine maps.

mod group;
mod isometry;
mod matrix;

pub use group::{
    generate_group, generate_group_with, joint_fixed_dimension, product, toral_extension, toral_extension_with,
    verify_flat_manifold, verify_flat_manifold_with, FlatManifoldPresentation, GroupOptions, HolonomyData,
    DEFAULT_MAX_GROUP_SIZE,
};
pub use isometry::{has_fixed_point, AffineTorusIsometry, FixedPointData};
pub use matrix::{IntMatrix, TorusVector};
