//! Facet-volume realization for n-simplices.
//!
//! Given n+1 positive numbers satisfying the strict simplex inequalities
//! (every value is smaller than the sum of the others), this crate builds an
//! n-simplex in R^n whose facet normals have exactly those lengths. The
//! pipeline is:
//!
//! 1. [`realization`]: a recursive point chain produces n+1 vectors with the
//!    requested lengths that sum to zero and span R^n.
//! 2. [`minkowski`]: the vectors are read as a positive facet loop and
//!    inverted back to the unique barycentric vertex loop.
//!
//! The [`loops`] module carries the maps between vertex, edge and facet loops
//! and the cofactor iteration identity the inversion is built on; [`linalg`]
//! provides the small dense kernels (LU determinant, cofactor matrix,
//! (n-1)-ary vector product).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod linalg;
pub mod loops;
pub mod minkowski;
pub mod random;
pub mod realization;

pub use error::{Error, Result};
pub use linalg::{cofactor_matrix, determinant, vector_product, MatN, VecN};
pub use loops::{
    classify, complete_from_main, edge_map, edge_map_inverse, facet_map, facet_map_by_definition, facet_normals, make_loop, similarity_factor,
    similarity_iterate, LoopClass, LoopN, Role, SimilarityReport,
};
pub use minkowski::{
    invert_facet_map, realize_simplex, verify_realization, RealizationResult, Residuals,
    VerificationReport,
};
pub use random::{random_feasible_lengths, random_loop, random_positive_loop, random_signed_loop, SplitMix64};
pub use realization::{
    check_inequalities, choose_reduced_length, construct_points, realize_facet_vectors, realize_point_chain,
    FeasibilityReport, Orientation, PointChain, ReductionPolicy, Unit, VolumeSpec,
};
