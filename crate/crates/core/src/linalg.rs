//! Dense small-dimension linear algebra.
//!
//! Matrices are stored column-major: the convention throughout
//! this crate is that the j-th column of a main part is the j-th vector of a
//! loop. Determinants use LU with partial pivoting; the cofactor matrix is
//! built entry by entry from signed minors so it stays well defined for
//! singular inputs.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Smallest supported dimension.
pub const MIN_DIM: usize = 2;
/// Largest supported dimension.
pub const MAX_DIM: usize = 12;
/// Relative pivot size below which a matrix is treated as singular.
pub const DEGENERACY_EPS: f64 = 1e-12;
/// Relative tolerance for identity checks.
pub const REL_TOL: f64 = 1e-9;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(n))
    }
}

/// A vector in R^n.
#[derive(Clone, Debug, PartialEq)]
pub struct VecN(Vec<f64>);

impl VecN {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(coords))
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// The i-th unit coordinate vector (zero-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self(v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &VecN) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.dot(self))
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| f64::max(m, c.abs()))
    }

    pub fn scaled(&self, s: f64) -> VecN {
        Self(self.0.iter().map(|c| c * s).collect())
    }
}

impl Index<usize> for VecN {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &VecN {
    type Output = VecN;

    fn add(self, rhs: &VecN) -> VecN {
        debug_assert_eq!(self.dim(), rhs.dim());
        VecN(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &VecN {
    type Output = VecN;

    fn sub(self, rhs: &VecN) -> VecN {
        debug_assert_eq!(self.dim(), rhs.dim());
        VecN(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &VecN {
    type Output = VecN;

    fn neg(self) -> VecN {
        VecN(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul<f64> for &VecN {
    type Output = VecN;

    fn mul(self, s: f64) -> VecN {
        self.scaled(s)
    }
}

/// Sum of a non-empty slice of equal-dimension vectors.
pub(crate) fn sum(vs: &[VecN]) -> VecN {
    let mut acc = vec![0.0; vs[0].dim()];
    for v in vs {
        for (a, c) in acc.iter_mut().zip(v.coords()) {
            *a += c;
        }
    }
    VecN(acc)
}

/// A square n x n matrix, column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MatN {
    n: usize,
    data: Vec<f64>,
}

impl MatN {
    /// Builds a matrix whose j-th column is `cols[j]`.
    pub fn from_columns(cols: &[VecN]) -> Result<Self> {
        let n = cols.len();
        check_dim(n)?;
        let mut data = Vec::with_capacity(n * n);
        for c in cols {
            if c.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.dim(),
                });
            }
            data.extend_from_slice(c.coords());
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from row-major nested slices; handy for literals.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite);
                }
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub(crate) fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// `I + J`: twos on the diagonal and ones elsewhere. Right-multiplying a
    /// vertex main part by it gives the cumulative edge sums.
    pub fn identity_plus_ones(n: usize) -> Self {
        let mut m = Self {
            n,
            data: vec![1.0; n * n],
        };
        for i in 0..n {
            m.set(i, i, 2.0);
        }
        m
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        check_dim(entries.len())?;
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, x);
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.n + row]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, x: f64) {
        self.data[col * self.n + row] = x;
    }

    pub fn column(&self, j: usize) -> VecN {
        VecN(self.data[j * self.n..(j + 1) * self.n].to_vec())
    }

    pub fn columns(&self) -> Vec<VecN> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> MatN {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn scaled(&self, s: f64) -> MatN {
        MatN {
            n: self.n,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, rhs: &MatN) -> MatN {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        let n = self.n;
        let mut out = Self::zeros(n);
        for j in 0..n {
            for k in 0..n {
                let b = rhs.get(k, j);
                if b == 0.0 {
                    continue;
                }
                for i in 0..n {
                    out.data[j * n + i] += self.get(i, k) * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &MatN) -> MatN {
        assert_eq!(self.n, rhs.n, "matrix dimensions differ");
        MatN {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    pub fn max_column_norm(&self) -> f64 {
        (0..self.n)
            .map(|j| self.column(j).norm())
            .fold(0.0, f64::max)
    }

    /// Singularity test: the smallest LU pivot relative to the largest
    /// column norm is at most [`DEGENERACY_EPS`].
    pub fn is_singular(&self) -> bool {
        let scale = self.max_column_norm();
        if scale == 0.0 {
            return true;
        }
        let mut buf = self.data.clone();
        let lu = lu_in_place(&mut buf, self.n);
        lu.min_pivot <= DEGENERACY_EPS * scale
    }
}

struct LuSummary {
    det: f64,
    min_pivot: f64,
}

/// Gaussian elimination with partial pivoting on a column-major `n x n`
/// buffer. The buffer is overwritten.
fn lu_in_place(a: &mut [f64], n: usize) -> LuSummary {
    let mut det = 1.0;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let mut p = k;
        let mut best = a[k * n + k].abs();
        for i in k + 1..n {
            let v = a[k * n + i].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        min_pivot = min_pivot.min(best);
        if best == 0.0 {
            return LuSummary {
                det: 0.0,
                min_pivot: 0.0,
            };
        }
        if p != k {
            for j in 0..n {
                a.swap(j * n + k, j * n + p);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let f = a[k * n + i] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k + 1..n {
                a[j * n + i] -= f * a[j * n + k];
            }
        }
    }
    LuSummary { det, min_pivot }
}

fn det_buf(buf: &mut [f64], n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => buf[0],
        2 => buf[0] * buf[3] - buf[2] * buf[1],
        _ => lu_in_place(buf, n).det,
    }
}

/// Copies `m` without row `skip_row` and column `skip_col` into `out`.
fn minor_into(m: &MatN, skip_row: usize, skip_col: usize, out: &mut Vec<f64>) {
    out.clear();
    for j in (0..m.n).filter(|&j| j != skip_col) {
        for i in (0..m.n).filter(|&i| i != skip_row) {
            out.push(m.get(i, j));
        }
    }
}

pub fn determinant(m: &MatN) -> f64 {
    let mut buf = m.data.clone();
    det_buf(&mut buf, m.n)
}

/// The cofactor matrix `c(M)`, entry `(i, j)` equal to `(-1)^(i+j)` times
/// the minor obtained by deleting row i and column j, so that
/// `c(M) * M^T = M^T * c(M) = det(M) * I`.
pub fn cofactor_matrix(m: &MatN) -> MatN {
    let n = m.n;
    let mut out = MatN::zeros(n);
    let mut buf = Vec::with_capacity((n - 1) * (n - 1));
    for j in 0..n {
        for i in 0..n {
            minor_into(m, i, j, &mut buf);
            let d = det_buf(&mut buf, n - 1);
            out.set(i, j, if (i + j) % 2 == 0 { d } else { -d });
        }
    }
    out
}

/// The generalized vector product `[w_1, ..., w_{n-1}]` of n-1 vectors in
/// R^n: the unique `r` with `dot(w_0, r) = det(w_0, w_1, ..., w_{n-1})` for
/// every `w_0`.
pub fn vector_product(ws: &[VecN]) -> Result<VecN> {
    let n = ws.len() + 1;
    check_dim(n)?;
    for w in ws {
        if w.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.dim(),
            });
        }
    }
    let k = n - 1;
    let mut buf = Vec::with_capacity(k * k);
    let coords = (0..n)
        .map(|i| {
            buf.clear();
            for w in ws {
                buf.extend(
                    w.coords()
                        .iter()
                        .enumerate()
                        .filter(|&(r, _)| r != i)
                        .map(|(_, &x)| x),
                );
            }
            let d = det_buf(&mut buf, k);
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    Ok(VecN(coords))
}
