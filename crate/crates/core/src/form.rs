//! Symplectic and twisted bilinear forms on layer-major truncations.
//!
//! The order-`n` pairing of two tuples `x = (x_{n-1}, ..., x_0)` and
//! `y = (y_{n-1}, ..., y_0)` is the signed antidiagonal sum
//!
//! ```text
//! omega_n(x, y) = sum over p + q = n - 1 of (-1)^p <x[p], y[q]>
//! ```
//!
//! where `x[p]` is the layer at storage position `p` (top layer first). With
//! this indexing the order-two pairing is exactly
//! `<x1, y0'> - <x0, y1'>` on pairs written `(first, second)`, which is the
//! duality pairing the adjoint theory is built on. The form is alternating
//! precisely when `n` is even; odd orders are symmetric instead and get
//! their alternating structure by twisting with the complex rotation
//! `sigma(x) = (-x2, x1, -x4, x3, ...)` applied to every layer.
//!
//! Gram matrices are materialized densely with entries in `{0, 1, -1}` and
//! carry a structurally exact inverse, so adjoint computations introduce no
//! inversion error.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::vector::{RochVector, TruncatedVector};

/// The rotation `sigma(x) = (-x2, x1, -x4, x3, ...)` pairing consecutive
/// coordinates. Squares to minus the identity and preserves the Euclidean
/// norm; requires even dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexStructure {
    dim: usize,
}

impl ComplexStructure {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::OddTruncation(dim));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, v: &TruncatedVector) -> Result<TruncatedVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                context: "complex structure",
                expected: self.dim,
                found: v.dim(),
            });
        }
        let x = v.as_slice();
        let mut out = vec![0.0; self.dim];
        for k in 0..self.dim / 2 {
            out[2 * k] = -x[2 * k + 1];
            out[2 * k + 1] = x[2 * k];
        }
        Ok(TruncatedVector::new(out).expect("finite"))
    }

    /// Matrix with columns `sigma(e_j)`; entries in `{0, 1, -1}`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for k in 0..self.dim / 2 {
            m[(2 * k, 2 * k + 1)] = -1.0;
            m[(2 * k + 1, 2 * k)] = 1.0;
        }
        m
    }
}

/// Applies the rotation to a single vector; errors on odd dimension.
pub fn sigma_apply(v: &TruncatedVector) -> Result<TruncatedVector> {
    ComplexStructure::new(v.dim())?.apply(v)
}

/// The layer-diagonal lift of the rotation to order-`n` tuples.
pub fn tau_sigma(order: usize, truncation: usize) -> Result<LinearOperator> {
    let sigma = ComplexStructure::new(truncation)?;
    let block = sigma.matrix();
    LinearOperator::new(DMatrix::identity(order, order).kronecker(&block))
}

/// Untwisted order-`n` pairing evaluated directly from the layers.
pub fn omega_n(x: &RochVector, y: &RochVector) -> Result<f64> {
    if x.order() != y.order() {
        return Err(Error::DimensionMismatch {
            context: "pairing order",
            expected: x.order(),
            found: y.order(),
        });
    }
    if x.truncation() != y.truncation() {
        return Err(Error::DimensionMismatch {
            context: "pairing truncation",
            expected: x.truncation(),
            found: y.truncation(),
        });
    }
    let n = x.order();
    let mut total = 0.0;
    for p in 0..n {
        let q = n - 1 - p;
        let term = x.layer_at(p).inner(y.layer_at(q))?;
        total += if p % 2 == 0 { term } else { -term };
    }
    Ok(total)
}

/// Twisted pairing `omega_bar(x, y) = omega_n(x, tau_sigma y)` for odd
/// order on even truncations; alternating for every tuple.
pub fn omega_bar(x: &RochVector, y: &RochVector) -> Result<f64> {
    if x.order().is_multiple_of(2) {
        return Err(Error::InvalidForm {
            order: x.order(),
            truncation: x.truncation(),
            twisted: true,
        });
    }
    let sigma = ComplexStructure::new(y.truncation())?;
    let rotated = RochVector::new(
        y.layers().iter().map(|l| sigma.apply(l)).collect::<Result<Vec<_>>>()?,
    )?;
    omega_n(x, &rotated)
}

/// Descriptor used in the JSON interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDescriptor {
    pub n: usize,
    #[serde(rename = "N")]
    pub truncation: usize,
    pub twisted: bool,
}

/// A materialized bilinear form of order `n` at truncation `N` on the
/// layer-major basis, with its structurally exact inverse Gram matrix.
///
/// The Gram matrix is antisymmetric by construction exactly when the form
/// is alternating: untwisted even orders and twisted odd orders. Untwisted
/// odd orders are symmetric but still nondegenerate and are what the
/// untwisted adjoint on odd tuples pairs against.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    order: usize,
    truncation: usize,
    twisted: bool,
    gram: DMatrix<f64>,
    gram_inv: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(order: usize, truncation: usize, twisted: bool) -> Result<Self> {
        if order == 0 || truncation == 0 {
            return Err(Error::InvalidForm { order, truncation, twisted });
        }
        if twisted && (order.is_multiple_of(2) || !truncation.is_multiple_of(2)) {
            return Err(Error::InvalidForm { order, truncation, twisted });
        }
        // antidiagonal sign pattern over layers
        let mut signs = DMatrix::zeros(order, order);
        for p in 0..order {
            signs[(p, order - 1 - p)] = if p % 2 == 0 { 1.0 } else { -1.0 };
        }
        let inner = if twisted {
            ComplexStructure::new(truncation)?.matrix()
        } else {
            DMatrix::identity(truncation, truncation)
        };
        let gram = signs.kronecker(&inner);
        // untwisted: G^2 = (-1)^(n-1) I; twisted odd order: G^2 = -I
        let gram_inv = if twisted {
            -&gram
        } else if order % 2 == 1 {
            gram.clone()
        } else {
            -&gram
        };
        Ok(Self { order, truncation, twisted, gram, gram_inv })
    }

    pub fn from_descriptor(d: &FormDescriptor) -> Result<Self> {
        Self::new(d.n, d.truncation, d.twisted)
    }

    pub fn descriptor(&self) -> FormDescriptor {
        FormDescriptor { n: self.order, truncation: self.truncation, twisted: self.twisted }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    /// Ambient flattened dimension `n * N`.
    pub fn dim(&self) -> usize {
        self.order * self.truncation
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Structural inverse; exact because the Gram entries are `0` and `±1`
    /// and the inverse is a signed copy of the Gram matrix itself.
    pub fn gram_inverse(&self) -> &DMatrix<f64> {
        &self.gram_inv
    }

    /// True when the Gram matrix is antisymmetric entry for entry.
    pub fn is_alternating(&self) -> bool {
        crate::linalg::antisymmetry_defect(&self.gram) == 0.0
    }

    /// Pairing of flattened layer-major coordinates through the Gram matrix.
    pub fn pair_flat(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "form evaluation",
                expected: self.dim(),
                found: if x.len() != self.dim() { x.len() } else { y.len() },
            });
        }
        Ok((x.transpose() * &self.gram * y)[(0, 0)])
    }

    /// Pairing of tuples through the Gram matrix. The direct layer sums
    /// [`omega_n`] and [`omega_bar`] provide the independent route.
    pub fn pair(&self, x: &RochVector, y: &RochVector) -> Result<f64> {
        if x.order() != self.order || y.order() != self.order {
            return Err(Error::DimensionMismatch {
                context: "form order",
                expected: self.order,
                found: if x.order() != self.order { x.order() } else { y.order() },
            });
        }
        self.pair_flat(&x.flatten(), &y.flatten())
    }

    /// The Gram matrix wrapped as an operator, for row-major JSON export.
    pub fn gram_operator(&self) -> LinearOperator {
        LinearOperator::new(self.gram.clone()).expect("finite")
    }

    /// The induced map into the dual: `x -> gram * x` on coordinates.
    pub fn induced_map(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "induced map",
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(&self.gram * x)
    }
}

/// Builds the materialized form; alias matching the operation vocabulary.
pub fn form_matrix(order: usize, truncation: usize, twisted: bool) -> Result<SymplecticForm> {
    SymplecticForm::new(order, truncation, twisted)
}

/// Permutation sending interleaved-basis coordinates to layer-major
/// coordinates for order two: the interleaved basis alternates
/// `(e_k, 0), (0, e_k)`.
pub fn interleave_permutation(truncation: usize) -> LinearOperator {
    let mut m = DMatrix::zeros(2 * truncation, 2 * truncation);
    for k in 0..truncation {
        m[(k, 2 * k)] = 1.0;
        m[(truncation + k, 2 * k + 1)] = 1.0;
    }
    LinearOperator::new(m).expect("finite")
}

/// Conjugates a layer-major order-two operator into the interleaved basis.
pub fn to_interleaved(t: &LinearOperator) -> Result<LinearOperator> {
    let n2 = t.rows();
    if !t.is_square() || !n2.is_multiple_of(2) {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    let p = interleave_permutation(n2 / 2);
    Ok(&(&p.transpose() * t) * &p)
}

/// Conjugates an interleaved-basis operator back to layer-major coordinates.
pub fn to_layer_major(t: &LinearOperator) -> Result<LinearOperator> {
    let n2 = t.rows();
    if !t.is_square() || !n2.is_multiple_of(2) {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    let p = interleave_permutation(n2 / 2);
    Ok(&(&p * t) * &p.transpose())
}

/// Outcome of testing whether `T` carries one form into another.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceCheck {
    pub equivalent: bool,
    pub residual: f64,
    pub invertible: bool,
}

/// Tests `T^T G_2 T = G_1` within `tol` together with invertibility of `T`,
/// the equivalence criterion between two symplectic structures.
pub fn check_equivalence(
    t: &LinearOperator,
    f1: &SymplecticForm,
    f2: &SymplecticForm,
    tol: f64,
) -> Result<EquivalenceCheck> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    if t.rows() != f1.dim() || t.rows() != f2.dim() {
        return Err(Error::DimensionMismatch {
            context: "equivalence check",
            expected: f1.dim(),
            found: t.rows(),
        });
    }
    let pulled = t.matrix().transpose() * f2.gram() * t.matrix();
    let residual = (pulled - f1.gram()).amax();
    let sv = t.matrix().singular_values();
    let smin = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let invertible = smin > 1e-12 * smax.max(1.0);
    Ok(EquivalenceCheck { equivalent: invertible && residual <= tol, residual, invertible })
}

/// Same residual test against a raw Gram pair; used where the forms come
/// from constructions rather than descriptors.
pub fn check_equivalence_grams(
    t: &DMatrix<f64>,
    g1: &DMatrix<f64>,
    g2: &DMatrix<f64>,
    tol: f64,
) -> EquivalenceCheck {
    let pulled = t.transpose() * g2 * t;
    let residual = (pulled - g1).amax();
    let sv = t.singular_values();
    let smin = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let invertible = smin > 1e-12 * smax.max(1.0);
    EquivalenceCheck { equivalent: invertible && residual <= tol, residual, invertible }
}
