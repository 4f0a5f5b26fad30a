//! Small dense square matrices over `f64` and `Complex64`.
//!
//! Everything here is sized for machines with a handful of internal states,
//! so the storage is a flat row-major `Vec` and products are the textbook
//! triple loop. States are row vectors that multiply matrices from the left.

use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar field for [`SquareMatrix`].
pub trait Scalar:
    Copy + PartialEq + fmt::Debug + Add<Output = Self> + Mul<Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Squared modulus.
    fn norm_sqr(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
}

#[derive(Clone, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

pub type ComplexSquareMatrix = SquareMatrix<Complex64>;
pub type RealSquareMatrix = SquareMatrix<f64>;

impl<T: Scalar> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            entries: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major rows, rejecting ragged, empty or
    /// non-finite input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidMachine("matrix has no rows".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidMachine(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::InvalidMachine(format!(
                    "entry ({i}, {j}) is not finite"
                )));
            }
            entries.extend(row);
        }
        Ok(SquareMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(T) -> S) -> SquareMatrix<S> {
        SquareMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Elementwise sum. Panics on a dimension mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        SquareMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|x| x * s)
    }

    /// Matrix product `self · other`. Panics on a dimension mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] = out.entries[i * n + j] + a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Row vector times matrix, `v · self`.
    pub fn left_apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut out = vec![T::zero(); self.dim];
        for (i, &vi) in v.iter().enumerate() {
            if vi == T::zero() {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(i)) {
                *o = *o + vi * m;
            }
        }
        Ok(out)
    }

    /// `self^k` by binary exponentiation; `self^0` is the identity.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_deviation(&self, other: &Self) -> f64
    where
        T: std::ops::Sub<Output = T>,
    {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a - b).norm_sqr().sqrt())
            .fold(0.0, f64::max)
    }

    /// Entrywise squared modulus, `|M_ij|²`.
    pub fn modulus_squared(&self) -> RealSquareMatrix {
        self.map(Scalar::norm_sqr)
    }

    /// True when every entry is zero or one (within `tol`) with exactly one
    /// unit entry in every row and every column.
    pub fn is_permutation(&self, tol: f64) -> bool {
        let n = self.dim;
        let mut col_hits = vec![0usize; n];
        for i in 0..n {
            let mut row_hits = 0;
            for j in 0..n {
                let m = self[(i, j)].norm_sqr().sqrt();
                if m > tol {
                    if (m - 1.0).abs() > tol {
                        return false;
                    }
                    row_hits += 1;
                    col_hits[j] += 1;
                }
            }
            if row_hits != 1 {
                return false;
            }
        }
        col_hits.iter().all(|&c| c == 1)
    }
}

impl<T> std::ops::Index<(usize, usize)> for SquareMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for SquareMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.dim + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self.entries.chunks(self.dim.max(1)).collect();
        f.debug_struct("SquareMatrix")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

impl ComplexSquareMatrix {
    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn from_real(m: &RealSquareMatrix) -> Self {
        m.map(|x| Complex64::new(x, 0.0))
    }

    /// Real parts, failing if any imaginary part exceeds `tol`.
    pub fn to_real(&self, tol: f64) -> Result<RealSquareMatrix> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let im = self[(i, j)].im;
                if im.abs() > tol {
                    return Err(Error::NonRealMatrix { row: i, col: j, im });
                }
            }
        }
        Ok(self.map(|z| z.re))
    }
}

/// Numerical tolerances used across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// State normalization.
    pub norm: f64,
    /// Structural checks (unitarity, projectors, stochasticity).
    pub structural: f64,
    /// Probability below which an outcome branch is treated as absent.
    pub prune: f64,
    /// Language similarity threshold.
    pub language: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            norm: 1e-9,
            structural: 1e-9,
            prune: 1e-12,
            language: 1e-9,
        }
    }
}

impl TolerancePolicy {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("norm", self.norm),
            ("structural", self.structural),
            ("prune", self.prune),
            ("language", self.language),
        ];
        for (name, v) in all {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidConfig(format!(
                    "tolerance `{name}` must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// First violation of `M·M† = I` beyond `tol`, as a human readable message.
pub fn unitarity_defect(m: &ComplexSquareMatrix, tol: f64) -> Option<String> {
    let n = m.dim();
    for i in 0..n {
        for j in i..n {
            let dot: Complex64 = m
                .row(i)
                .iter()
                .zip(m.row(j))
                .map(|(a, b)| a * b.conj())
                .sum();
            if i == j {
                if (dot.re - 1.0).abs() > tol || dot.im.abs() > tol {
                    return Some(format!(
                        "row {i} of unitary not unit-norm (squared norm {:.12})",
                        dot.re
                    ));
                }
            } else if dot.norm() > tol {
                return Some(format!(
                    "rows {i} and {j} of unitary not orthogonal (overlap {:.3e})",
                    dot.norm()
                ));
            }
        }
    }
    None
}

pub fn validate_unitary(m: &ComplexSquareMatrix, tol: f64) -> bool {
    let product = m.mul(&m.adjoint());
    product.max_deviation(&ComplexSquareMatrix::identity(m.dim())) <= tol
}

/// Hermitian and idempotent within `tol`.
pub fn validate_projector(p: &ComplexSquareMatrix, tol: f64) -> bool {
    p.max_deviation(&p.adjoint()) <= tol && p.mul(p).max_deviation(p) <= tol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StochasticClass {
    pub stochastic: bool,
    pub doubly_stochastic: bool,
}

pub fn classify_stochastic(m: &ComplexSquareMatrix, tol: f64) -> Result<StochasticClass> {
    Ok(classify_real(&m.to_real(tol)?, tol))
}

pub(crate) fn classify_real(m: &RealSquareMatrix, tol: f64) -> StochasticClass {
    let n = m.dim();
    let entries_ok = m.rows().flatten().all(|&x| x >= -tol && x <= 1.0 + tol);
    let rows_ok = m
        .rows()
        .all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= tol);
    let stochastic = entries_ok && rows_ok;
    let cols_ok =
        (0..n).all(|j| ((0..n).map(|i| m[(i, j)]).sum::<f64>() - 1.0).abs() <= tol);
    StochasticClass {
        stochastic,
        doubly_stochastic: stochastic && cols_ok,
    }
}

pub fn matrix_power(m: &ComplexSquareMatrix, k: u64) -> ComplexSquareMatrix {
    m.pow(k)
}
