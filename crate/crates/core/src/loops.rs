//! Loop spaces: ordered (n+1)-tuples of vectors in R^n summing to zero.
//!
//! A simplex with barycentre at the origin is a *vertex loop*; its
//! consecutive edge vectors `w_0 = v_0 - v_n`, `w_i = v_i - v_{i-1}` form the
//! *edge loop*; the facet normals built from the edges form the *facet loop*.
//! The role tag is metadata only. Maps check closure, never the tag, because
//! a facet loop is routinely reinterpreted as a new vertex loop.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{
    self, check_dim, cofactor_matrix, determinant, vector_product, MatN, VecN, REL_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Vertex,
    Edge,
    Facet,
}

/// An element of the loop space in dimension n: n+1 vectors of R^n with zero
/// sum. Index 0 is the "extra" vector; indices 1..=n are the main part.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopN {
    vectors: Vec<VecN>,
    role: Role,
}

/// Builds a loop after checking arity, dimensions and closure.
///
/// Closure is accepted when `|sum| <= 1e-9 * max |v_i|`.
pub fn make_loop(vs: Vec<VecN>, role: Role) -> Result<LoopN> {
    let n = vs.first().map(VecN::dim).unwrap_or(0);
    check_dim(n)?;
    if vs.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: vs.len(),
        });
    }
    if let Some(bad) = vs.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    let l = LoopN { vectors: vs, role };
    let defect = l.closure_defect();
    let tolerance = REL_TOL * l.max_norm();
    if defect > tolerance {
        return Err(Error::ClosureViolation { defect, tolerance });
    }
    Ok(l)
}

/// Prepends `v_0 = -(v_1 + ... + v_n)` to a main part.
pub fn complete_from_main(main: &[VecN], role: Role) -> Result<LoopN> {
    let n = main.len();
    check_dim(n)?;
    if let Some(bad) = main.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    Ok(LoopN::from_main_unchecked(main.to_vec(), role))
}

impl LoopN {
    pub(crate) fn from_main_unchecked(main: Vec<VecN>, role: Role) -> Self {
        let v0 = -&linalg::sum(&main);
        let mut vectors = Vec::with_capacity(main.len() + 1);
        vectors.push(v0);
        vectors.extend(main);
        LoopN { vectors, role }
    }

    pub(crate) fn from_matrix(m: &MatN, role: Role) -> Self {
        Self::from_main_unchecked(m.columns(), role)
    }

    /// Dimension n of the ambient space.
    #[inline]
    pub fn dim(&self) -> usize {
        self.vectors.len() - 1
    }

    #[inline]
    pub fn role(&self) -> Role {
        self.role
    }

    #[inline]
    pub fn vectors(&self) -> &[VecN] {
        &self.vectors
    }

    #[inline]
    pub fn vector(&self, i: usize) -> &VecN {
        &self.vectors[i]
    }

    pub fn into_vectors(self) -> Vec<VecN> {
        self.vectors
    }

    /// Same vectors under a different role.
    pub fn with_role(mut self, role: Role) -> LoopN {
        self.role = role;
        self
    }

    pub fn scaled(&self, s: f64) -> LoopN {
        LoopN {
            vectors: self.vectors.iter().map(|v| v.scaled(s)).collect(),
            role: self.role,
        }
    }

    /// The main part `(v_1, ..., v_n)` as a matrix with those columns.
    pub fn main_part(&self) -> MatN {
        MatN::from_columns(&self.vectors[1..]).expect("loop dimensions validated at construction")
    }

    pub fn det_main(&self) -> f64 {
        determinant(&self.main_part())
    }

    /// Euclidean norm of the vector sum.
    pub fn closure_defect(&self) -> f64 {
        linalg::sum(&self.vectors).norm()
    }

    pub fn max_norm(&self) -> f64 {
        self.vectors.iter().map(VecN::norm).fold(0.0, f64::max)
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.iter().map(VecN::norm).collect()
    }

    /// Largest absolute coordinate over all vectors.
    pub fn max_abs(&self) -> f64 {
        self.vectors.iter().map(VecN::norm_inf).fold(0.0, f64::max)
    }

    /// Largest coordinate difference against another loop of equal shape.
    pub fn max_abs_diff(&self, other: &LoopN) -> f64 {
        assert_eq!(self.vectors.len(), other.vectors.len());
        self.vectors
            .iter()
            .zip(&other.vectors)
            .map(|(a, b)| (a - b).norm_inf())
            .fold(0.0, f64::max)
    }

    /// Gram matrix of all n+1 vectors, row-major.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        self.vectors
            .iter()
            .map(|a| self.vectors.iter().map(|b| a.dot(b)).collect())
            .collect()
    }
}

/// Orientation and degeneracy of a loop's main part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopClass {
    pub det_main: f64,
    pub affine_independent: bool,
    pub positive: bool,
}

pub fn classify(l: &LoopN) -> LoopClass {
    let main = l.main_part();
    let det_main = determinant(&main);
    let affine_independent = !main.is_singular();
    LoopClass {
        det_main,
        affine_independent,
        positive: affine_independent && det_main > 0.0,
    }
}

/// Vertex loop to edge loop.
pub fn edge_map(v: &LoopN) -> LoopN {
    let n = v.dim();
    let vs = &v.vectors;
    let vectors = (0..=n)
        .map(|i| {
            let prev = if i == 0 { n } else { i - 1 };
            &vs[i] - &vs[prev]
        })
        .collect();
    LoopN {
        vectors,
        role: Role::Edge,
    }
}

/// Edge loop to the unique vertex loop with barycentre at the origin.
pub fn edge_map_inverse(w: &LoopN) -> LoopN {
    let n = w.dim();
    let ws = &w.vectors;
    let mut v0 = VecN::zeros(n);
    for (j, wj) in ws.iter().enumerate().skip(1) {
        v0 = &v0 - &wj.scaled((n + 1 - j) as f64);
    }
    let v0 = v0.scaled(1.0 / (n + 1) as f64);
    let mut vectors = Vec::with_capacity(n + 1);
    vectors.push(v0);
    for j in 1..=n {
        let next = &vectors[j - 1] + &ws[j];
        vectors.push(next);
    }
    LoopN {
        vectors,
        role: Role::Vertex,
    }
}

/// The facet normal opposite `P_p`, straight from the vector-product
/// definition: `z_p = -[w_0, .., ^w_p, ^w_{p+1}, .., w_n]` for `p < n` and
/// `z_n = (-1)^(n+1) [w_1, .., w_{n-1}]`.
fn facet_normal_by_definition(ws: &[VecN], p: usize) -> VecN {
    let n = ws.len() - 1;
    if p == n {
        let z = vector_product(&ws[1..n]).expect("loop dimensions validated");
        if n.is_multiple_of(2) {
            -&z
        } else {
            z
        }
    } else {
        let rest: Vec<VecN> = ws
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != p && i != p + 1)
            .map(|(_, w)| w.clone())
            .collect();
        -&vector_product(&rest).expect("loop dimensions validated")
    }
}

/// Facet map computed entirely from vector products, one per facet.
///
/// This is the reference route; [`facet_map`] uses the cofactor shortcut.
pub fn facet_map_by_definition(w: &LoopN) -> LoopN {
    let vectors = (0..=w.dim())
        .map(|p| facet_normal_by_definition(&w.vectors, p))
        .collect();
    LoopN {
        vectors,
        role: Role::Facet,
    }
}

/// Matrix with columns `w_1, w_1 + w_2, ..., w_1 + ... + w_n`.
fn cumulative_edges(w: &LoopN) -> MatN {
    let mut acc = VecN::zeros(w.dim());
    let cols: Vec<VecN> = w.vectors[1..]
        .iter()
        .map(|wi| {
            acc = &acc + wi;
            acc.clone()
        })
        .collect();
    MatN::from_columns(&cols).expect("loop dimensions validated")
}

/// Edge loop to facet loop.
///
/// The main part is the cofactor matrix of the cumulative edge matrix;
/// `z_0` comes from its own vector product, so the closure defect of the
/// result reflects the actual rounding rather than being zero by
/// construction.
pub fn facet_map(w: &LoopN) -> LoopN {
    let main = cofactor_matrix(&cumulative_edges(w));
    let mut vectors = Vec::with_capacity(w.dim() + 1);
    vectors.push(facet_normal_by_definition(&w.vectors, 0));
    vectors.extend(main.columns());
    let z = LoopN {
        vectors,
        role: Role::Facet,
    };
    #[cfg(debug_assertions)]
    {
        let reference = facet_map_by_definition(w);
        let scale = edge_scale(w).max(z.max_abs());
        debug_assert!(
            z.max_abs_diff(&reference) <= 1e-8 * scale,
            "facet map routes disagree"
        );
    }
    z
}

/// Product of the n-1 largest edge norms: a bound on every facet normal.
pub(crate) fn edge_scale(w: &LoopN) -> f64 {
    let mut norms = w.norms();
    norms.sort_by(|a, b| b.total_cmp(a));
    norms.iter().take(w.dim() - 1).product()
}

/// Product of the n-1 largest edge lengths of a vertex loop; bounds the
/// length of every facet normal.
pub fn facet_scale(v: &LoopN) -> f64 {
    edge_scale(&edge_map(v))
}

/// Facet normals of a vertex loop, `facet_map(edge_map(v))`.
pub fn facet_normals(v: &LoopN) -> LoopN {
    facet_map(&edge_map(v))
}

/// The iteration identity's scale factor `(n+1)^(n-1) * det^(n-2)`.
pub fn similarity_factor(n: usize, det_main: f64) -> f64 {
    libm::pow((n + 1) as f64, (n - 1) as f64) * libm::pow(det_main, (n - 2) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimilarityReport {
    pub kappa: f64,
    /// `max |V''_main - kappa * V_main|` over all entries.
    pub residual: f64,
    /// Magnitude the residual is judged against: the larger of
    /// `|kappa| * max |V_main|` and the Hadamard bound on the minors taken in
    /// the second pass.
    pub scale: f64,
}

impl SimilarityReport {
    pub fn within(&self, rel_tol: f64) -> bool {
        self.residual <= rel_tol * self.scale
    }
}

/// Applies `facet_normals` twice, reading the intermediate facet loop as a
/// vertex loop. The result is `kappa` times the input main part.
pub fn similarity_iterate(v: &LoopN) -> (LoopN, SimilarityReport) {
    let once = facet_normals(v).with_role(Role::Vertex);
    let twice = facet_normals(&once).with_role(Role::Vertex);
    let main = v.main_part();
    let kappa = similarity_factor(v.dim(), determinant(&main));
    let residual = twice.main_part().sub(&main.scaled(kappa)).max_abs();
    let second_arg = once.main_part().mul(&MatN::identity_plus_ones(v.dim()));
    let mut norms: Vec<f64> = second_arg.columns().iter().map(VecN::norm).collect();
    norms.sort_by(|a, b| b.total_cmp(a));
    let minor_bound: f64 = norms.iter().take(v.dim() - 1).product();
    let scale = (kappa.abs() * main.max_abs()).max(minor_bound);
    (
        twice,
        SimilarityReport {
            kappa,
            residual,
            scale,
        },
    )
}
