//! Adjoints with respect to nondegenerate pairings.
//!
//! The defining relation for the adjoint of `T` is
//! `form(T+ x, y) = form(x, T y)` for all `x, y`. On matrices with a
//! (plus-or-minus) symmetric Gram matrix `G` this resolves to
//! `T+ = G^{-1} T^T G`, and because the Gram inverses here are structurally
//! exact the oracle route introduces no inversion error. Three closed forms
//! are checked against it: the index-shuffled formula in the interleaved
//! basis at order two, the two-by-two block formula, and the
//! anti-transposed alternating-sign pattern for block upper triangular
//! operators at any order.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::form::{tau_sigma, SymplecticForm};
use crate::kp::sampled_quasinorm_opnorm;
use crate::operator::LinearOperator;

/// Adjoint by the defining relation, via the exact Gram inverse.
pub fn adjoint_oracle(t: &LinearOperator, f: &SymplecticForm) -> Result<LinearOperator> {
    adjoint_rectangular(t, f, f)
}

/// Rectangular adjoint between two truncations of the same order: for
/// `T` mapping the domain into the codomain, `T+` maps back and satisfies
/// `form_dom(T+ y, x) = form_cod(y, T x)`.
pub fn adjoint_rectangular(
    t: &LinearOperator,
    f_dom: &SymplecticForm,
    f_cod: &SymplecticForm,
) -> Result<LinearOperator> {
    if t.cols() != f_dom.dim() {
        return Err(Error::DimensionMismatch {
            context: "adjoint domain",
            expected: f_dom.dim(),
            found: t.cols(),
        });
    }
    if t.rows() != f_cod.dim() {
        return Err(Error::DimensionMismatch {
            context: "adjoint codomain",
            expected: f_cod.dim(),
            found: t.rows(),
        });
    }
    let m = f_dom.gram_inverse() * t.matrix().transpose() * f_cod.gram();
    LinearOperator::new(m)
}

fn pair_swap(i: usize) -> usize {
    if i.is_multiple_of(2) {
        i + 1
    } else {
        i - 1
    }
}

/// Closed-form adjoint in the interleaved basis at order two: entry
/// `(r, c)` of the adjoint is `(-1)^(r+c)` times entry
/// `(pair_swap(c), pair_swap(r))` of the input, where `pair_swap` exchanges
/// the two members of each coordinate pair.
pub fn adjoint_interleaved(t: &LinearOperator) -> Result<LinearOperator> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    let n = t.rows();
    if !n.is_multiple_of(2) {
        return Err(Error::OddTruncation(n));
    }
    Ok(LinearOperator::from_fn(n, n, |r, c| {
        let sign = if (r + c) % 2 == 0 { 1.0 } else { -1.0 };
        sign * t.entry(pair_swap(c), pair_swap(r))
    }))
}

/// Closed-form adjoint of the order-two layer-block operator
/// `[[alpha, beta], [delta, gamma]]`, namely
/// `[[gamma^T, -beta^T], [-delta^T, alpha^T]]`.
pub fn adjoint_block2(
    alpha: &LinearOperator,
    beta: &LinearOperator,
    delta: &LinearOperator,
    gamma: &LinearOperator,
) -> Result<LinearOperator> {
    let n = alpha.rows();
    for block in [alpha, beta, delta, gamma] {
        if block.rows() != n || block.cols() != n {
            return Err(Error::DimensionMismatch {
                context: "block adjoint",
                expected: n,
                found: block.rows().max(block.cols()),
            });
        }
    }
    LinearOperator::from_layer_blocks(&[
        vec![gamma.matrix().transpose(), -beta.matrix().transpose()],
        vec![-delta.matrix().transpose(), alpha.matrix().transpose()],
    ])
}

/// Closed-form adjoint for a block upper triangular operator at order `n`:
/// the block pattern is anti-transposed with alternating signs,
/// `T+[r][c] = (-1)^(r+c) (T[n-1-c][n-1-r])^T`. Strictly lower layer blocks
/// of the input must vanish identically.
#[allow(clippy::needless_range_loop)] // (r, c) mirrors the block pattern
pub fn adjoint_triangular_n(t: &LinearOperator, order: usize) -> Result<LinearOperator> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    if order == 0 || !t.rows().is_multiple_of(order) {
        return Err(Error::DimensionMismatch {
            context: "triangular adjoint",
            expected: order,
            found: t.rows(),
        });
    }
    let nb = t.rows() / order;
    for r in 0..order {
        for c in 0..r {
            if t.layer_block(order, r, c)?.amax() != 0.0 {
                return Err(Error::NotUpperTriangular);
            }
        }
    }
    let mut blocks: Vec<Vec<DMatrix<f64>>> = vec![vec![DMatrix::zeros(nb, nb); order]; order];
    for r in 0..order {
        for c in r..order {
            let source = t.layer_block(order, order - 1 - c, order - 1 - r)?;
            let sign = if (r + c) % 2 == 0 { 1.0 } else { -1.0 };
            blocks[r][c] = source.transpose() * sign;
        }
    }
    LinearOperator::from_layer_blocks(&blocks)
}

/// Adjoint with respect to the twisted form, plus the residuals of the two
/// closed-form candidates against it.
#[derive(Debug, Clone)]
pub struct SharpAdjoint {
    /// Definition-based adjoint through the twisted Gram matrix.
    pub sharp: LinearOperator,
    /// Defect of `(T#)^T G_bar = G_bar T`; a sanity residual for the
    /// defining relation itself.
    pub definition_defect: f64,
    /// Residual of the candidate `-T+ tau_sigma`.
    pub residual_neg_tau: f64,
    /// Residual of the candidate `tau_sigma^{-1} T+ tau_sigma`.
    pub residual_conjugated: f64,
}

/// Adjoint with respect to the twisted form of odd order. The defining
/// relation is authoritative; the two closed-form candidates are evaluated
/// and their residuals reported, never asserted.
pub fn sharp_adjoint(t: &LinearOperator, f_bar: &SymplecticForm) -> Result<SharpAdjoint> {
    if !f_bar.is_twisted() {
        return Err(Error::InvalidForm {
            order: f_bar.order(),
            truncation: f_bar.truncation(),
            twisted: false,
        });
    }
    let sharp = adjoint_oracle(t, f_bar)?;
    let untwisted = SymplecticForm::new(f_bar.order(), f_bar.truncation(), false)?;
    let plus = adjoint_oracle(t, &untwisted)?;
    let tau = tau_sigma(f_bar.order(), f_bar.truncation())?;
    let neg_tau = -&(&plus * &tau);
    let conjugated = &(&(-&tau) * &plus) * &tau; // tau^{-1} = -tau
    let definition_defect =
        (sharp.matrix().transpose() * f_bar.gram() - f_bar.gram() * t.matrix()).amax();
    Ok(SharpAdjoint {
        residual_neg_tau: (&neg_tau - &sharp).max_abs(),
        residual_conjugated: (&conjugated - &sharp).max_abs(),
        sharp,
        definition_defect,
    })
}

/// Result of the form-preservation test.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticCheck {
    pub symplectic: bool,
    /// Largest defect of `form_cod(T e_a, T e_b) - form_dom(e_a, e_b)`
    /// over basis pairs, i.e. the max entry of `T^T G_cod T - G_dom`.
    pub residual: f64,
}

/// Tests whether `T` preserves the pairing, rectangular shapes allowed:
/// the domain and codomain each carry their own form of the same order.
pub fn is_symplectic_transformation(
    t: &LinearOperator,
    f_dom: &SymplecticForm,
    f_cod: &SymplecticForm,
    tol: f64,
) -> Result<SymplecticCheck> {
    if t.cols() != f_dom.dim() || t.rows() != f_cod.dim() {
        return Err(Error::DimensionMismatch {
            context: "symplectic transformation",
            expected: f_dom.dim(),
            found: t.cols(),
        });
    }
    if f_dom.order() != f_cod.order() || f_dom.is_twisted() != f_cod.is_twisted() {
        return Err(Error::InvalidForm {
            order: f_cod.order(),
            truncation: f_cod.truncation(),
            twisted: f_cod.is_twisted(),
        });
    }
    let pulled = t.matrix().transpose() * f_cod.gram() * t.matrix();
    let residual = (pulled - f_dom.gram()).amax();
    Ok(SymplecticCheck { symplectic: residual <= tol, residual })
}

/// Square-case convenience for endomorphisms.
pub fn is_symplectic_endo(
    t: &LinearOperator,
    f: &SymplecticForm,
    tol: f64,
) -> Result<SymplecticCheck> {
    is_symplectic_transformation(t, f, f, tol)
}

/// The inclusion-after-quotient operator on pairs: `(w, x) -> (x, 0)` in
/// layer blocks `[[0, I], [0, 0]]`.
pub fn inclusion_quotient(truncation: usize) -> LinearOperator {
    let zero = DMatrix::zeros(truncation, truncation);
    let id = DMatrix::identity(truncation, truncation);
    LinearOperator::from_layer_blocks(&[vec![zero.clone(), id], vec![zero.clone(), zero]])
        .expect("square blocks")
}

/// Witness report for the failure of the star-algebra norm identity under
/// the symplectic involution.
#[derive(Debug, Clone)]
pub struct CstarFailureReport {
    /// Max entry of `(jQ)+ (jQ)`; zero exactly.
    pub adjoint_product_max_abs: f64,
    /// Max entry of `jQ` itself; one, so the operator is nonzero.
    pub operator_max_abs: f64,
    /// Sampled operator quasinorm of `jQ`.
    pub sampled_norm: f64,
    /// Sampled operator quasinorm of `(jQ)+`.
    pub sampled_norm_adjoint: f64,
    /// Ratio of the sampled norms.
    pub ratio: f64,
}

/// Builds `jQ`, checks `(jQ)+ (jQ) = 0` exactly while `jQ != 0`, and
/// samples the operator quasinorms of both. A star-algebra identity would
/// force the product norm to equal the product of norms.
pub fn cstar_failure_witness(
    truncation: usize,
    rng: &mut impl Rng,
    samples: usize,
) -> Result<CstarFailureReport> {
    let jq = inclusion_quotient(truncation);
    let f = SymplecticForm::new(2, truncation, false)?;
    let plus = adjoint_oracle(&jq, &f)?;
    let product = &plus * &jq;
    let sampled_norm = sampled_quasinorm_opnorm(&jq, 2, rng, samples)?;
    let sampled_norm_adjoint = sampled_quasinorm_opnorm(&plus, 2, rng, samples)?;
    Ok(CstarFailureReport {
        adjoint_product_max_abs: product.max_abs(),
        operator_max_abs: jq.max_abs(),
        sampled_norm,
        sampled_norm_adjoint,
        ratio: sampled_norm_adjoint / sampled_norm,
    })
}
