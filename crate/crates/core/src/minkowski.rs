//! Facet normals back to vertices.
//!
//! On positive loops the facet-normal map is a bijection. Applying the
//! cofactor step `Y = c(Z_main * (I + J))` to a facet loop `Z = F(V)` returns
//! `kappa * V_main` with `kappa = (n+1)^(n-1) * det(V_main)^(n-2)`, and
//! `det(V_main)` is itself recoverable as `det(Z_main)^(1/(n-1)) / (n+1)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{cofactor_matrix, determinant, MatN};
use crate::loops::{facet_normals, similarity_factor, LoopN, Role};
use crate::realization::{realize_facet_vectors, VolumeSpec};

/// Relative error allowed on the internal forward check of an inversion.
pub const ROUND_TRIP_TOL: f64 = 1e-7;

/// Vertex loop (barycentre at the origin) whose facet normals are `z`.
///
/// Requires `det(Z_main) > 0` and not singular; the result is verified by
/// recomputing its facet normals.
pub fn invert_facet_map(z: &LoopN) -> Result<LoopN> {
    invert_with_error(z).map(|(v, _)| v)
}

fn invert_with_error(z: &LoopN) -> Result<(LoopN, f64)> {
    let n = z.dim();
    let main = z.main_part();
    let det_z = determinant(&main);
    if det_z <= 0.0 || main.is_singular() {
        return Err(Error::NotPositive { det: det_z });
    }
    let y = cofactor_matrix(&main.mul(&MatN::identity_plus_ones(n)));
    let det_v = libm::pow(det_z, 1.0 / (n - 1) as f64) / (n + 1) as f64;
    let kappa = similarity_factor(n, det_v);
    let v = LoopN::from_matrix(&y.scaled(1.0 / kappa), Role::Vertex);

    let error = facet_normals(&v).max_abs_diff(z) / z.max_abs();
    if error.is_nan() || error > ROUND_TRIP_TOL {
        return Err(Error::RoundTripFailure {
            error,
            tolerance: ROUND_TRIP_TOL,
        });
    }
    Ok((v, error))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    /// Largest relative deviation of a recomputed facet length from target.
    pub max_length_error: f64,
    /// Closure defect of the realized facet loop relative to its largest
    /// vector.
    pub closure_defect: f64,
    /// Relative mismatch between the realized facet loop and the facet
    /// normals of the recovered vertices.
    pub round_trip_error: f64,
}

/// A simplex realizing prescribed facet lengths.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationResult {
    pub vertices: LoopN,
    pub facet_loop: LoopN,
    pub det_vertex: f64,
    /// Recomputed facet lengths in the spec's unit.
    pub facet_lengths: Vec<f64>,
    pub residuals: Residuals,
}

/// Lengths to vectors to vertices.
pub fn realize_simplex(spec: &VolumeSpec) -> Result<RealizationResult> {
    let facet_loop = realize_facet_vectors(spec)?;
    let (vertices, round_trip_error) = invert_with_error(&facet_loop)?;
    let check = verify_realization(&vertices, spec);
    Ok(RealizationResult {
        det_vertex: check.det_main,
        facet_lengths: check.lengths,
        residuals: Residuals {
            max_length_error: check.max_relative_error,
            closure_defect: facet_loop.closure_defect() / facet_loop.max_norm(),
            round_trip_error,
        },
        vertices,
        facet_loop,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    /// Facet lengths of the vertex loop in the target's unit.
    pub lengths: Vec<f64>,
    pub max_relative_error: f64,
    /// Closure defect of the recomputed facet loop.
    pub closure_defect: f64,
    pub det_main: f64,
    pub positive: bool,
}

/// Recomputes facet normals of `v` and compares their lengths with `target`.
pub fn verify_realization(v: &LoopN, target: &VolumeSpec) -> VerificationReport {
    let z = facet_normals(v);
    let factor = target.unit.to_normal_factor(v.dim());
    let lengths: Vec<f64> = z.norms().into_iter().map(|l| l / factor).collect();
    let max_relative_error = if lengths.len() == target.lengths.len() {
        lengths
            .iter()
            .zip(&target.lengths)
            .map(|(got, want)| (got - want).abs() / want.abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let det_main = v.det_main();
    VerificationReport {
        lengths,
        max_relative_error,
        closure_defect: z.closure_defect(),
        det_main,
        positive: det_main > 0.0,
    }
}
