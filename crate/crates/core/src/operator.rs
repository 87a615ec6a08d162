//! Dense linear operators with explicit domain and codomain dimensions.
//!
//! Operators act on layer-major coordinates: a vector of an order-`n`
//! truncation at size `N` is flattened to length `n * N` with the top layer
//! (highest derivative) first. Rectangular shapes are allowed so that shifts
//! and block operators may change the truncation size.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vector::RochVector;

/// A dense real matrix acting between coordinate spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    matrix: DMatrix<f64>,
    label: Option<String>,
}

impl LinearOperator {
    /// Wraps a matrix, rejecting non-finite entries.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { matrix, label: None })
    }

    /// Builds from row-major nested entries.
    pub fn from_rows(entries: &[Vec<f64>]) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyVector);
        }
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                context: "operator rows",
                expected: cols,
                found: entries.iter().map(Vec::len).find(|&l| l != cols).unwrap_or(0),
            });
        }
        let matrix = DMatrix::from_fn(rows, cols, |i, j| entries[i][j]);
        Self::new(matrix)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self { matrix: DMatrix::from_fn(rows, cols, f), label: None }
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n, n), label: None }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { matrix: DMatrix::zeros(rows, cols), label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn transpose(&self) -> Self {
        Self { matrix: self.matrix.transpose(), label: None }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { matrix: &self.matrix * factor, label: None }
    }

    /// Largest entry magnitude; zero for the zero operator.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.matrix.norm()
    }

    /// Operator 2-norm (largest singular value).
    pub fn norm_spectral(&self) -> f64 {
        let sv = self.matrix.singular_values();
        sv.iter().fold(0.0f64, |m, &s| m.max(s))
    }

    pub fn try_inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        self.matrix
            .clone()
            .try_inverse()
            .map(|m| Self { matrix: m, label: None })
            .ok_or(Error::SingularMatrix)
    }

    pub fn apply(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        if v.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                context: "operator application",
                expected: self.cols(),
                found: v.len(),
            });
        }
        Ok(&self.matrix * v)
    }

    /// Applies the operator to a layer-major flattened tuple, reshaping the
    /// result as a tuple of the same order over `rows / order` coordinates.
    pub fn apply_roch(&self, v: &RochVector) -> Result<RochVector> {
        let order = v.order();
        if self.cols() != v.flat_dim() {
            return Err(Error::DimensionMismatch {
                context: "operator application",
                expected: self.cols(),
                found: v.flat_dim(),
            });
        }
        if !self.rows().is_multiple_of(order) {
            return Err(Error::DimensionMismatch {
                context: "codomain layer split",
                expected: order,
                found: self.rows(),
            });
        }
        let out = &self.matrix * v.flatten();
        RochVector::from_flat(order, &out)
    }

    /// Extracts the `(r, c)` layer block when the operator is square of size
    /// `order * n` with `n = rows / order`.
    pub fn layer_block(&self, order: usize, r: usize, c: usize) -> Result<DMatrix<f64>> {
        if !self.rows().is_multiple_of(order) || !self.cols().is_multiple_of(order) {
            return Err(Error::DimensionMismatch {
                context: "layer block extraction",
                expected: order,
                found: self.rows(),
            });
        }
        let br = self.rows() / order;
        let bc = self.cols() / order;
        Ok(self.matrix.view((r * br, c * bc), (br, bc)).into_owned())
    }

    /// Assembles an operator from an `order x order` grid of equally sized blocks.
    pub fn from_layer_blocks(blocks: &[Vec<DMatrix<f64>>]) -> Result<Self> {
        let order = blocks.len();
        if order == 0 || blocks.iter().any(|r| r.len() != order) {
            return Err(Error::DimensionMismatch {
                context: "layer block grid",
                expected: order,
                found: blocks.iter().map(Vec::len).find(|&l| l != order).unwrap_or(0),
            });
        }
        let br = blocks[0][0].nrows();
        let bc = blocks[0][0].ncols();
        if blocks.iter().flatten().any(|b| b.nrows() != br || b.ncols() != bc) {
            return Err(Error::DimensionMismatch {
                context: "layer block sizes",
                expected: br,
                found: 0,
            });
        }
        let mut matrix = DMatrix::zeros(order * br, order * bc);
        for (r, row) in blocks.iter().enumerate() {
            for (c, block) in row.iter().enumerate() {
                matrix.view_mut((r * br, c * bc), (br, bc)).copy_from(block);
            }
        }
        Self::new(matrix)
    }
}

impl Mul for &LinearOperator {
    type Output = LinearOperator;
    fn mul(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator { matrix: &self.matrix * &rhs.matrix, label: None }
    }
}

impl Add for &LinearOperator {
    type Output = LinearOperator;
    fn add(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator { matrix: &self.matrix + &rhs.matrix, label: None }
    }
}

impl Sub for &LinearOperator {
    type Output = LinearOperator;
    fn sub(self, rhs: &LinearOperator) -> LinearOperator {
        LinearOperator { matrix: &self.matrix - &rhs.matrix, label: None }
    }
}

impl Neg for &LinearOperator {
    type Output = LinearOperator;
    fn neg(self) -> LinearOperator {
        LinearOperator { matrix: -&self.matrix, label: None }
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<f64>>,
}

impl Serialize for LinearOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.matrix[(i, j)]).collect())
            .collect();
        OperatorRepr { rows: self.rows(), cols: self.cols(), entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = OperatorRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows
            || repr.entries.iter().any(|r| r.len() != repr.cols)
        {
            return Err(D::Error::custom("entries do not match declared rows x cols"));
        }
        LinearOperator::from_rows(&repr.entries).map_err(D::Error::custom)
    }
}
