//! Vectors of prescribed lengths that close up and span R^n.
//!
//! For lengths `z_0 <= ... <= z_n` with `2 z_n < z_0 + ... + z_n`, the points
//! `P_0, ..., P_{n-1}` are built recursively with `P_n` at the origin and
//! `|P_k - P_{k-1}| = z_k` (indices mod n+1). Each recursion level replaces
//! the two largest lengths by a single `z'` chosen so that both the reduced
//! tuple and the triangle `(z', z_{n-1}, z_n)` are strictly feasible, solves
//! the smaller problem, and then lifts `P_{n-1}` off the hyperplane along a
//! fresh coordinate axis at a chosen dihedral angle.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::linalg::{check_dim, VecN};
use crate::loops::{make_loop, LoopN, Role};
use crate::random::SplitMix64;

/// Relative slack the simplex inequalities must clear.
pub const FEASIBILITY_EPS: f64 = 1e-12;
/// Angles with `|sin| <= ANGLE_EPS` would keep the lifted point in the
/// hyperplane.
pub const ANGLE_EPS: f64 = 1e-9;

/// How lengths are measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Unit {
    /// Raw facet-normal length: the (n-1)-volume of the parallelotope
    /// spanned by the facet's boundary edges.
    #[default]
    Normal,
    /// (n-1)-volume of the facet simplex itself, i.e. normal length divided
    /// by (n-1)!.
    Facet,
}

impl Unit {
    /// Factor converting a length in this unit to normal units.
    pub fn to_normal_factor(self, n: usize) -> f64 {
        match self {
            Unit::Normal => 1.0,
            Unit::Facet => (1..n).map(|k| k as f64).product(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Orientation {
    /// Reflect if needed so the facet loop's main part has positive
    /// determinant.
    #[default]
    Positive,
    Any,
}

/// How the intermediate length `z'` is picked inside its open interval.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReductionPolicy {
    #[default]
    Midpoint,
    /// Uniform on the middle 90% of the interval. Each recursion level seeds
    /// SplitMix64 with `seed ^ n` for its own dimension n.
    Uniform { seed: u64 },
}

/// Target facet lengths plus construction parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeSpec {
    pub lengths: Vec<f64>,
    /// Dihedral angles `alpha_2, ..., alpha_{n-1}` in radians.
    pub angles: Vec<f64>,
    pub unit: Unit,
    pub orientation: Orientation,
    pub reduction: ReductionPolicy,
}

impl VolumeSpec {
    /// Spec with right dihedral angles, normal units, positive orientation
    /// and midpoint reduction.
    pub fn new(lengths: Vec<f64>) -> Self {
        let angles = vec![FRAC_PI_2; lengths.len().saturating_sub(3)];
        Self {
            lengths,
            angles,
            unit: Unit::default(),
            orientation: Orientation::default(),
            reduction: ReductionPolicy::default(),
        }
    }

    pub fn with_angles(mut self, angles: Vec<f64>) -> Self {
        self.angles = angles;
        self
    }

    pub fn with_unit(mut self, unit: Unit) -> Self {
        self.unit = unit;
        self
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_reduction(mut self, reduction: ReductionPolicy) -> Self {
        self.reduction = reduction;
        self
    }

    /// Simplex dimension n (one less than the number of lengths).
    pub fn dim(&self) -> usize {
        self.lengths.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lengths.len() < 3 {
            return Err(Error::ArityTooSmall(self.lengths.len()));
        }
        check_dim(self.dim())?;
        validate_lengths(&self.lengths)?;
        validate_angles(&self.angles, self.dim())
    }

    /// Lengths converted to normal units.
    pub fn normal_lengths(&self) -> Vec<f64> {
        let f = self.unit.to_normal_factor(self.dim());
        self.lengths.iter().map(|z| z * f).collect()
    }
}

fn validate_lengths(lengths: &[f64]) -> Result<()> {
    for (index, &value) in lengths.iter().enumerate() {
        if value.is_infinite() {
            return Err(Error::NonFinite);
        }
        if value.is_nan() || value <= 0.0 {
            return Err(Error::NonPositiveLength { index, value });
        }
    }
    Ok(())
}

fn validate_angles(angles: &[f64], n: usize) -> Result<()> {
    let expected = n.saturating_sub(2);
    if angles.len() != expected {
        return Err(Error::AngleCount {
            expected,
            found: angles.len(),
        });
    }
    for (i, &angle) in angles.iter().enumerate() {
        if !angle.is_finite() {
            return Err(Error::NonFinite);
        }
        if libm::sin(angle).abs() <= ANGLE_EPS {
            return Err(Error::AngleDegenerate { index: i + 2, angle });
        }
    }
    Ok(())
}

fn validate_sorted(lengths: &[f64]) -> Result<()> {
    validate_lengths(lengths)?;
    if lengths.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsortedLengths);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// `sum - 2 * max`, in the input's units.
    pub margin: f64,
    /// Position of the largest length when infeasible.
    pub violating_index: Option<usize>,
}

/// Checks `2 * z_k < z_0 + ... + z_n` for every k.
///
/// The margin must exceed `1e-12 * sum` (plus a denormal floor); equality
/// means a flat simplex and is reported infeasible.
pub fn check_inequalities(lengths: &[f64]) -> Result<FeasibilityReport> {
    if lengths.len() < 3 {
        return Err(Error::ArityTooSmall(lengths.len()));
    }
    validate_lengths(lengths)?;
    let total: f64 = lengths.iter().sum();
    let (imax, zmax) = lengths
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, z)| {
            if z > best.1 {
                (i, z)
            } else {
                best
            }
        });
    let margin = total - 2.0 * zmax;
    let feasible = margin > FEASIBILITY_EPS * total + 1e-300;
    Ok(FeasibilityReport {
        feasible,
        margin,
        violating_index: (!feasible).then_some(imax),
    })
}

fn require_feasible(lengths: &[f64]) -> Result<()> {
    let r = check_inequalities(lengths)?;
    if r.feasible {
        Ok(())
    } else {
        Err(Error::InfeasibleInput {
            margin: r.margin,
            index: r.violating_index.unwrap_or(0),
        })
    }
}

/// Picks the replacement `z'` for the two largest of n+1 sorted lengths
/// (n >= 3).
///
/// When `z_{n-2} < z_n` the result lies strictly inside
/// `(max(z_{n-2}, z_n - z_{n-1}), min(z_0 + ... + z_{n-2}, z_n))`; when the
/// three largest lengths coincide it is `z_n` itself.
pub fn choose_reduced_length(sorted: &[f64], policy: ReductionPolicy) -> Result<f64> {
    if sorted.len() < 4 {
        return Err(Error::ArityTooSmall(sorted.len()));
    }
    validate_sorted(sorted)?;
    require_feasible(sorted)?;
    let n = sorted.len() - 1;
    let (z_nm2, z_nm1, z_n) = (sorted[n - 2], sorted[n - 1], sorted[n]);
    if z_nm2 == z_n {
        return Ok(z_n);
    }
    let head: f64 = sorted[..n - 1].iter().sum();
    let lo = z_nm2.max(z_n - z_nm1);
    let hi = head.min(z_n);
    let t = match policy {
        ReductionPolicy::Midpoint => 0.5,
        ReductionPolicy::Uniform { seed } => {
            0.05 + 0.9 * SplitMix64::new(seed ^ n as u64).next_f64()
        }
    };
    Ok(lo + (hi - lo) * t)
}

/// Points `P_0, ..., P_n` with `P_n` at the origin.
///
/// `P_k` (k < n) has a nonzero coordinate k and zeros after it.
/// `permutation[i]` is the original index of the i-th sorted length.
#[derive(Clone, Debug, PartialEq)]
pub struct PointChain {
    pub points: Vec<VecN>,
    pub permutation: Vec<usize>,
}

impl PointChain {
    /// `z_k = P_k - P_{k-1}` with `P_{-1} = P_n`, in sorted order.
    pub fn steps(&self) -> Vec<VecN> {
        let m = self.points.len();
        (0..m)
            .map(|k| &self.points[k] - &self.points[(k + m - 1) % m])
            .collect()
    }
}

/// Height over side `base` of the triangle with sides `base, s, t`,
/// using the cancellation-free Heron product.
fn triangle_height(base: f64, s: f64, t: f64) -> f64 {
    let mut sides = [base, s, t];
    sides.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = sides;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.5 * libm::sqrt(p.max(0.0)) / base
}

/// Recursive construction; returns `P_0..P_{m-1}` as m-dimensional
/// coordinate arrays for m+1 sorted lengths.
fn build_chain(sorted: &[f64], angles: &[f64], policy: ReductionPolicy) -> Vec<Vec<f64>> {
    let m = sorted.len() - 1;
    if m == 2 {
        let (z0, z1, z2) = (sorted[0], sorted[1], sorted[2]);
        let x = (z0 * z0 + z2 * z2 - z1 * z1) / (2.0 * z0);
        let y = triangle_height(z0, z1, z2);
        return vec![vec![z0, 0.0], vec![x, y]];
    }

    let zr = choose_reduced_length(sorted, policy).expect("reduced tuples stay feasible");
    let mut reduced = sorted[..m - 1].to_vec();
    reduced.push(zr);
    let mut pts = build_chain(&reduced, &angles[..m - 3], policy);
    for p in &mut pts {
        p.push(0.0);
    }

    let (z_mid, z_far) = (sorted[m - 1], sorted[m]);
    let alpha = angles[m - 3];
    let anchor = VecN::from_vec_unchecked(pts[m - 2].clone());
    let axis = anchor.scaled(1.0 / anchor.norm());
    let prev = VecN::from_vec_unchecked(pts[m - 3].clone());
    let in_plane = &prev - &axis.scaled(prev.dot(&axis));
    let in_plane = in_plane.scaled(1.0 / in_plane.norm());

    let along = (z_far * z_far - z_mid * z_mid + zr * zr) / (2.0 * zr);
    let radius = triangle_height(zr, z_mid, z_far);
    let (s, c) = (libm::sin(alpha), libm::cos(alpha));
    let mut lifted: Vec<f64> = (0..m)
        .map(|i| along * axis[i] + radius * c * in_plane[i])
        .collect();
    lifted[m - 1] = radius * s;
    pts.push(lifted);
    pts
}

/// Builds the point chain for lengths already sorted ascending.
pub fn construct_points(
    sorted: &[f64],
    angles: &[f64],
    policy: ReductionPolicy,
) -> Result<PointChain> {
    if sorted.len() < 3 {
        return Err(Error::ArityTooSmall(sorted.len()));
    }
    let n = sorted.len() - 1;
    check_dim(n)?;
    validate_sorted(sorted)?;
    validate_angles(angles, n)?;
    require_feasible(sorted)?;
    let mut points: Vec<VecN> = build_chain(sorted, angles, policy)
        .into_iter()
        .map(VecN::from_vec_unchecked)
        .collect();
    points.push(VecN::zeros(n));
    Ok(PointChain {
        points,
        permutation: (0..=n).collect(),
    })
}

/// Sorts the spec's normal-unit lengths and builds their point chain.
pub fn realize_point_chain(spec: &VolumeSpec) -> Result<PointChain> {
    spec.validate()?;
    let lengths = spec.normal_lengths();
    require_feasible(&lengths)?;
    let mut perm: Vec<usize> = (0..lengths.len()).collect();
    perm.sort_by(|&a, &b| lengths[a].total_cmp(&lengths[b]));
    let sorted: Vec<f64> = perm.iter().map(|&i| lengths[i]).collect();
    let mut chain = construct_points(&sorted, &spec.angles, spec.reduction)?;
    chain.permutation = perm;
    Ok(chain)
}

/// n+1 vectors with `|z_p| = lengths[p]` (normal units) summing to zero and
/// spanning R^n.
pub fn realize_facet_vectors(spec: &VolumeSpec) -> Result<LoopN> {
    let chain = realize_point_chain(spec)?;
    let n = spec.dim();
    let mut vectors = vec![VecN::zeros(n); n + 1];
    for (k, step) in chain.steps().into_iter().enumerate() {
        vectors[chain.permutation[k]] = step;
    }
    let mut z = make_loop(vectors, Role::Facet)?;
    if spec.orientation == Orientation::Positive && z.det_main() < 0.0 {
        let flipped = z
            .vectors()
            .iter()
            .map(|v| {
                let mut c = v.coords().to_vec();
                c[n - 1] = -c[n - 1];
                VecN::from_vec_unchecked(c)
            })
            .collect();
        z = make_loop(flipped, Role::Facet)?;
    }
    Ok(z)
}
