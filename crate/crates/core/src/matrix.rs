//! Finite complex matrices standing in for bounded operators `B(X, Y)`.
//!
//! A `MatrixValue` with `rows x cols` entries acts from the `cols`-dimensional
//! truncation of `X` into the `rows`-dimensional truncation of `Y`.

use std::ops::{Add, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};

pub type C64 = nalgebra::Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixValue(DMatrix<C64>);

impl MatrixValue {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixValue(DMatrix::from_element(rows, cols, ZERO))
    }

    pub fn identity(n: usize) -> Self {
        MatrixValue(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        MatrixValue(DMatrix::from_fn(rows, cols, f))
    }

    /// Square diagonal matrix.
    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    /// Single-row matrix.
    pub fn row(entries: &[C64]) -> Self {
        Self::from_fn(1, entries.len(), |_, j| entries[j])
    }

    /// The matrix unit with a single 1 at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.0[(i, j)] = ONE;
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(HardyError::InvalidArgument("matrix has no rows".into()));
        }
        let ncols = rows[0].len();
        if ncols == 0 {
            return Err(HardyError::InvalidArgument("matrix has no columns".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(HardyError::ShapeMismatch {
                expected: (nrows, ncols),
                found: (nrows, bad.len()),
            });
        }
        Ok(Self::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Self {
        MatrixValue(m)
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.0[(i, j)] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// Plain transpose, no conjugation: the adjoint for the bilinear dual pairing.
    pub fn transpose(&self) -> Self {
        MatrixValue(self.0.transpose())
    }

    /// Conjugate transpose: the Hilbert-space adjoint.
    pub fn adjoint(&self) -> Self {
        MatrixValue(self.0.adjoint())
    }

    pub fn scale(&self, c: C64) -> Self {
        MatrixValue(self.0.map(|x| x * c))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        MatrixValue(self.0.map(|x| x * c))
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: C64, other: &MatrixValue) {
        self.0.zip_apply(&other.0, |a, b| *a += c * b);
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &MatrixValue) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in max_abs_diff");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_shape(&self, expected: (usize, usize)) -> Result<()> {
        if self.shape() != expected {
            return Err(HardyError::ShapeMismatch {
                expected,
                found: self.shape(),
            });
        }
        Ok(())
    }
}

impl Add for &MatrixValue {
    type Output = MatrixValue;

    fn add(self, rhs: &MatrixValue) -> MatrixValue {
        MatrixValue(&self.0 + &rhs.0)
    }
}

impl Sub for &MatrixValue {
    type Output = MatrixValue;

    fn sub(self, rhs: &MatrixValue) -> MatrixValue {
        MatrixValue(&self.0 - &rhs.0)
    }
}

/// Wire form: nested rows of `[re, im]` pairs.
impl Serialize for MatrixValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|i| {
                (0..self.cols())
                    .map(|j| {
                        let z = self.0[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect())
            .collect();
        MatrixValue::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
