//! The operator catalog: shifts, diagonal lifts, transvections, polar
//! embeddings, block operators built from disjoint normalized blocks, and
//! the projection onto a block operator's range.
//!
//! The classical fact behind the diagonal and shift entries: the surjective
//! isometries acting compatibly on the whole family of coordinate spaces
//! are exactly the signed permutations `x_k -> e_k x_{pi(k)}` with
//! `|e_k| = 1`. At finite truncation every operator is bounded on every
//! member of the family, so the usable shadow of scale compatibility is
//! plain orthogonality of the diagonal block, and that is what the
//! structural form-preservation tests check.

use nalgebra::{DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::form::SymplecticForm;
use crate::kp::kp_differential;
use crate::linalg;
use crate::operator::LinearOperator;
use crate::vector::TruncatedVector;

const UNIT_NORM_TOL: f64 = 1e-12;

/// Disjoint interval supports in ascending coordinate order, together with
/// one unit-norm coefficient vector per support, each supported exactly
/// inside its range. Disjointness is what makes the blocks pairwise
/// orthogonal, which is all the block-operator identities consume.
#[derive(Debug, Clone, PartialEq)]
pub struct Blocking {
    supports: Vec<std::ops::Range<usize>>,
    coefficients: Vec<TruncatedVector>,
}

impl Blocking {
    /// Validates disjointness, ordering and normalization. Supports are
    /// zero-based half-open interval ranges in ascending order; gaps
    /// between them are allowed (the shift blocking starts at the second
    /// coordinate), overlap is not.
    pub fn new(
        supports: Vec<std::ops::Range<usize>>,
        coefficients: Vec<TruncatedVector>,
    ) -> Result<Self> {
        if supports.is_empty() || supports.len() != coefficients.len() {
            return Err(Error::InvalidSupports);
        }
        let mut next = 0;
        for s in &supports {
            if s.start < next || s.is_empty() {
                return Err(Error::InvalidSupports);
            }
            next = s.end;
        }
        let ambient = coefficients[0].dim();
        if next > ambient {
            return Err(Error::InvalidSupports);
        }
        for (k, (s, u)) in supports.iter().zip(&coefficients).enumerate() {
            if u.dim() != ambient {
                return Err(Error::InvalidCoefficient { block: k, detail: "dimension mismatch" });
            }
            let outside = u
                .as_slice()
                .iter()
                .enumerate()
                .any(|(i, &x)| x != 0.0 && !(s.start <= i && i < s.end));
            if outside {
                return Err(Error::InvalidCoefficient {
                    block: k,
                    detail: "nonzero entry outside the support",
                });
            }
            if (u.norm() - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::InvalidCoefficient { block: k, detail: "not unit norm" });
            }
        }
        Ok(Self { supports, coefficients })
    }

    /// The shift blocking: `count` singleton supports with `u_k = e_{k+1}`,
    /// so the induced block operator is the layer-wise right shift.
    pub fn singleton_shift(count: usize, ambient: usize) -> Result<Self> {
        if count + 1 > ambient {
            return Err(Error::BlockingTooLarge { needed: count + 1, available: ambient });
        }
        let supports = (0..count).map(|k| k + 1..k + 2).collect();
        let coefficients = (0..count).map(|k| TruncatedVector::unit(ambient, k + 1)).collect();
        Self::new(supports, coefficients)
    }

    pub fn block_count(&self) -> usize {
        self.supports.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.coefficients[0].dim()
    }

    pub fn supports(&self) -> &[std::ops::Range<usize>] {
        &self.supports
    }

    pub fn coefficient(&self, k: usize) -> &TruncatedVector {
        &self.coefficients[k]
    }
}

#[derive(Serialize, Deserialize)]
struct BlockingRepr {
    /// One-based inclusive index ranges, matching the set notation `{1..N}`.
    supports: Vec<[usize; 2]>,
    coefficients: Vec<Vec<f64>>,
}

impl Serialize for Blocking {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BlockingRepr {
            supports: self.supports.iter().map(|s| [s.start + 1, s.end]).collect(),
            coefficients: self.coefficients.iter().map(|c| c.as_slice().to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Blocking {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BlockingRepr::deserialize(deserializer)?;
        let supports = repr
            .supports
            .iter()
            .map(|&[lo, hi]| {
                if lo == 0 || hi < lo {
                    Err(D::Error::custom("supports are one-based inclusive ranges"))
                } else {
                    Ok(lo - 1..hi)
                }
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let coefficients = repr
            .coefficients
            .into_iter()
            .map(TruncatedVector::new)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Blocking::new(supports, coefficients).map_err(D::Error::custom)
    }
}

/// Assembles the block operator of order `n` induced by a blocking: layer
/// block `(r, c)` with `c >= r` maps the `k`-th domain coordinate to the
/// order-`(c - r)` differential of `u_k` (order zero being the embedding
/// `e_k -> u_k`), and strictly lower blocks vanish. The operator maps the
/// order-`n` truncation at `m` blocks into the order-`n` truncation at
/// `codomain_truncation` and preserves the order-`n` pairing exactly: the
/// cross terms cancel through the alternating binomial sum.
pub fn block_operator(
    blocking: &Blocking,
    order: usize,
    codomain_truncation: usize,
) -> Result<LinearOperator> {
    if order == 0 {
        return Err(Error::InvalidForm { order, truncation: codomain_truncation, twisted: false });
    }
    if blocking.ambient_dim() > codomain_truncation {
        return Err(Error::BlockingTooLarge {
            needed: blocking.ambient_dim(),
            available: codomain_truncation,
        });
    }
    let m = blocking.block_count();
    let n_out = codomain_truncation;
    let mut matrix = DMatrix::zeros(order * n_out, order * m);
    for k in 0..m {
        let u = blocking.coefficient(k);
        for distance in 0..order {
            let column = if distance == 0 {
                u.clone()
            } else {
                kp_differential(u, distance as u32)
            };
            for c in distance..order {
                let r = c - distance;
                for (i, &value) in column.as_slice().iter().enumerate() {
                    if value != 0.0 {
                        matrix[(r * n_out + i, c * m + k)] = value;
                    }
                }
            }
        }
    }
    LinearOperator::new(matrix)
}

/// Layer-diagonal right shift from truncation `n_dom` to `n_dom + 1`.
pub fn layer_shift_right(order: usize, n_dom: usize) -> LinearOperator {
    let mut r = DMatrix::zeros(n_dom + 1, n_dom);
    for i in 0..n_dom {
        r[(i + 1, i)] = 1.0;
    }
    LinearOperator::new(DMatrix::identity(order, order).kronecker(&r)).expect("finite")
}

/// Layer-diagonal left shift from truncation `n_cod` to `n_cod - 1`.
pub fn layer_shift_left(order: usize, n_cod: usize) -> LinearOperator {
    assert!(n_cod >= 2, "left shift needs at least two coordinates");
    let mut l = DMatrix::zeros(n_cod - 1, n_cod);
    for i in 0..n_cod - 1 {
        l[(i, i + 1)] = 1.0;
    }
    LinearOperator::new(DMatrix::identity(order, order).kronecker(&l)).expect("finite")
}

/// Layer-diagonal lift of a coordinatewise multiplier.
pub fn diagonal_lift(entries: &TruncatedVector, order: usize) -> LinearOperator {
    let n = entries.dim();
    let mut d = DMatrix::zeros(n, n);
    for (i, &x) in entries.as_slice().iter().enumerate() {
        d[(i, i)] = x;
    }
    LinearOperator::new(DMatrix::identity(order, order).kronecker(&d)).expect("finite")
}

/// The rank-one form-preserving map `x -> x + lambda * form(x, u) * u`.
/// Fixes the hyperplane of vectors pairing to zero with `u` pointwise.
pub fn transvection(
    u: &DVector<f64>,
    lambda: f64,
    f: &SymplecticForm,
) -> Result<LinearOperator> {
    if u.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            context: "transvection direction",
            expected: f.dim(),
            found: u.len(),
        });
    }
    if u.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroVector);
    }
    // form(x, u) = <x, G u> as a function of x
    let gu = f.gram() * u;
    let matrix = DMatrix::identity(f.dim(), f.dim()) + (u * gu.transpose()) * lambda;
    LinearOperator::new(matrix)
}

/// Outcome of the structural test for upper triangular form preservation.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperTriangularCheck {
    pub symplectic: bool,
    /// Defect of `alpha^T alpha = I`.
    pub orthogonality_residual: f64,
    /// Asymmetry of `alpha^T S`.
    pub selfadjointness_residual: f64,
}

/// An upper triangular pair operator `[[alpha, S], [0, alpha]]` preserves
/// the order-two pairing exactly when `alpha^T alpha = I` and `alpha^T S`
/// is symmetric; both residuals are reported.
pub fn upper_triangular_symplectic_check(
    alpha: &LinearOperator,
    s: &LinearOperator,
    tol: f64,
) -> Result<UpperTriangularCheck> {
    if !alpha.is_square() || !s.is_square() || alpha.rows() != s.rows() {
        return Err(Error::DimensionMismatch {
            context: "upper triangular check",
            expected: alpha.rows(),
            found: s.rows(),
        });
    }
    let n = alpha.rows();
    let ata = alpha.matrix().transpose() * alpha.matrix();
    let orthogonality_residual = (ata - DMatrix::identity(n, n)).amax();
    let ats = alpha.matrix().transpose() * s.matrix();
    let selfadjointness_residual = linalg::symmetry_defect(&ats);
    Ok(UpperTriangularCheck {
        symplectic: orthogonality_residual <= tol && selfadjointness_residual <= tol,
        orthogonality_residual,
        selfadjointness_residual,
    })
}

/// Assembles the upper triangular pair operator `[[alpha, S], [0, alpha]]`.
pub fn upper_triangular_pair(alpha: &LinearOperator, s: &LinearOperator) -> Result<LinearOperator> {
    if !alpha.is_square() || !s.is_square() || alpha.rows() != s.rows() {
        return Err(Error::DimensionMismatch {
            context: "upper triangular pair",
            expected: alpha.rows(),
            found: s.rows(),
        });
    }
    let n = alpha.rows();
    LinearOperator::from_layer_blocks(&[
        vec![alpha.matrix().clone(), s.matrix().clone()],
        vec![DMatrix::zeros(n, n), alpha.matrix().clone()],
    ])
}

/// Polar factors and the induced pair operator.
#[derive(Debug, Clone)]
pub struct PolarSymplectic {
    /// Orthogonal factor `U`.
    pub orthogonal: LinearOperator,
    /// Symmetric positive definite factor `P = (T^T T)^{1/2}`.
    pub positive: LinearOperator,
    /// The pair operator `[[U, T], [0, U]]`, a form-preserving map because
    /// `U^T T = P` is symmetric.
    pub embedded: LinearOperator,
}

/// Polar decomposition `T = U P` through the spectral square root of
/// `T^T T`, with eigenvalues clamped at `1e-14` to tolerate near-singular
/// input; genuinely singular input is rejected.
pub fn polar_symplectic(t: &LinearOperator) -> Result<PolarSymplectic> {
    if !t.is_square() {
        return Err(Error::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    let sv = t.matrix().singular_values();
    let smin = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if smin <= 1e-12 * smax.max(1.0) {
        return Err(Error::SingularMatrix);
    }
    let p = linalg::sqrt_spd(&(t.matrix().transpose() * t.matrix()), 1e-14);
    let p_inv = p.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    let mut u = t.matrix() * p_inv;
    // U = T P^{-1} loses orthogonality like the squared condition number;
    // the averaging iteration restores it to machine precision
    for _ in 0..4 {
        let n = t.rows();
        let defect = (u.transpose() * &u - DMatrix::identity(n, n)).amax();
        if defect < 1e-14 {
            break;
        }
        let inv_t = u.clone().try_inverse().ok_or(Error::SingularMatrix)?.transpose();
        u = (&u + inv_t) * 0.5;
    }
    let orthogonal = LinearOperator::new(u.clone())?;
    let positive = LinearOperator::new(p)?;
    let embedded = LinearOperator::from_layer_blocks(&[
        vec![u.clone(), t.matrix().clone()],
        vec![DMatrix::zeros(t.rows(), t.rows()), u],
    ])?;
    Ok(PolarSymplectic { orthogonal, positive, embedded })
}

/// Projection onto the range of a form-preserving operator:
/// `Pi = T G_dom^{-1} T^T G_cod` is idempotent and fixes the range
/// whenever `T^T G_cod T = G_dom`.
pub fn range_projection(
    t: &LinearOperator,
    f_dom: &SymplecticForm,
    f_cod: &SymplecticForm,
) -> Result<LinearOperator> {
    if t.cols() != f_dom.dim() || t.rows() != f_cod.dim() {
        return Err(Error::DimensionMismatch {
            context: "range projection",
            expected: f_dom.dim(),
            found: t.cols(),
        });
    }
    let m = t.matrix() * f_dom.gram_inverse() * t.matrix().transpose() * f_cod.gram();
    LinearOperator::new(m)
}

/// The basis-preserving but quasinorm-unbounded map
/// `(e_k, 0) -> (e_k, 0)`, `(0, e_k) -> (k e_k, e_k)`: in layer blocks
/// `[[I, diag(1..N)], [0, I]]`. Preserves the pairing on basis vectors
/// while the quasinorm of the image of `(e_k, e_k)` equals `k + 2`.
pub fn unbounded_symplectic_map(truncation: usize) -> LinearOperator {
    let mut d = DMatrix::zeros(truncation, truncation);
    for i in 0..truncation {
        d[(i, i)] = (i + 1) as f64;
    }
    LinearOperator::from_layer_blocks(&[
        vec![DMatrix::identity(truncation, truncation), d],
        vec![DMatrix::zeros(truncation, truncation), DMatrix::identity(truncation, truncation)],
    ])
    .expect("square blocks")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::{adjoint_rectangular, is_symplectic_endo, is_symplectic_transformation};
    use crate::kp::random_tuple;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use rand_distr::StandardNormal;

    const LN_2: f64 = std::f64::consts::LN_2;

    pub(crate) fn random_blocking(rng: &mut StdRng, ambient: usize, blocks: usize) -> Blocking {
        assert!(blocks * 2 <= ambient);
        // random consecutive supports of width 1..=2 covering a prefix
        let mut supports = Vec::new();
        let mut start = 0;
        for _ in 0..blocks {
            let width = 1 + rng.random_range(0..2usize);
            supports.push(start..start + width);
            start += width;
        }
        let coefficients = supports
            .iter()
            .map(|s| {
                let mut coords = vec![0.0; ambient];
                loop {
                    for c in coords[s.clone()].iter_mut() {
                        *c = rng.sample(StandardNormal);
                    }
                    let norm: f64 = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > 0.1 {
                        for c in coords.iter_mut() {
                            *c /= norm;
                        }
                        break;
                    }
                }
                TruncatedVector::new(coords).unwrap()
            })
            .collect();
        Blocking::new(supports, coefficients).unwrap()
    }

    #[test]
    #[allow(clippy::single_range_in_vec_init)] // supports are genuinely one range
    fn blocking_rejects_bad_input() {
        let u = TruncatedVector::unit(4, 0);
        let v = TruncatedVector::unit(4, 1);
        // overlapping supports
        assert!(Blocking::new(vec![0..2, 1..3], vec![u.clone(), v]).is_err());
        // descending order
        assert!(Blocking::new(vec![2..3, 0..1], vec![u.clone(), u.clone()]).is_err());
        // coefficient escaping its support
        let w = TruncatedVector::unit(4, 3);
        assert!(matches!(
            Blocking::new(vec![0..1], vec![w]),
            Err(Error::InvalidCoefficient { .. })
        ));
        // not normalized
        let half = TruncatedVector::new(vec![0.5, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            Blocking::new(vec![0..1], vec![half]),
            Err(Error::InvalidCoefficient { .. })
        ));
    }

    #[test]
    fn blocking_json_uses_one_based_inclusive_ranges() {
        let b = Blocking::singleton_shift(2, 4).unwrap();
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(
            json,
            r#"{"supports":[[2,2],[3,3]],"coefficients":[[0.0,1.0,0.0,0.0],[0.0,0.0,1.0,0.0]]}"#
        );
        let back: Blocking = serde_json::from_str(&json).unwrap();
        assert_eq!(back, b);
        // zero-based or reversed ranges are rejected
        assert!(serde_json::from_str::<Blocking>(
            r#"{"supports":[[0,1]],"coefficients":[[1.0,0.0]]}"#
        )
        .is_err());
    }

    #[test]
    fn singleton_blocking_gives_right_shift() {
        let order = 2;
        let count = 5;
        let b = Blocking::singleton_shift(count, count + 1).unwrap();
        let t = block_operator(&b, order, count + 1).unwrap();
        let r = layer_shift_right(order, count);
        assert_eq!(t, r);
    }

    #[test]
    #[allow(clippy::single_range_in_vec_init)]
    fn block_columns_are_differentials() {
        // two-point equal-weight blocks: the order-one column is -(log 2) u_k
        let u = TruncatedVector::new(vec![
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
        ])
        .unwrap();
        let b = Blocking::new(vec![0..2], vec![u.clone()]).unwrap();
        let t = block_operator(&b, 2, 3).unwrap();
        // column for the bottom-layer basis vector: (O1 u, u)
        let col = t.matrix().column(1).into_owned();
        let expected_top = u.scale(-LN_2);
        for i in 0..3 {
            assert!((col[i] - expected_top.as_slice()[i]).abs() < 1e-14);
            assert!((col[3 + i] - u.as_slice()[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn block_operator_preserves_pairing() {
        let mut rng = StdRng::seed_from_u64(59);
        for order in 2..=5usize {
            let b = random_blocking(&mut rng, 8, 3);
            let f_dom = SymplecticForm::new(order, 3, false).unwrap();
            let f_cod = SymplecticForm::new(order, 8, false).unwrap();
            let t = block_operator(&b, order, 8).unwrap();
            let check = is_symplectic_transformation(&t, &f_dom, &f_cod, 1e-9).unwrap();
            assert!(check.symplectic, "order={order} residual={}", check.residual);
            // spot check on random tuples through the direct pairing
            for _ in 0..5 {
                let x = random_tuple(order, 3, &mut rng);
                let y = random_tuple(order, 3, &mut rng);
                let lhs = crate::form::omega_n(
                    &t.apply_roch(&x).unwrap(),
                    &t.apply_roch(&y).unwrap(),
                )
                .unwrap();
                let rhs = crate::form::omega_n(&x, &y).unwrap();
                assert!((lhs - rhs).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn shift_pair_identities_exact() {
        let order = 2;
        let n = 6;
        let r = layer_shift_right(order, n);
        let l = layer_shift_left(order, n + 1);
        let f_dom = SymplecticForm::new(order, n, false).unwrap();
        let f_cod = SymplecticForm::new(order, n + 1, false).unwrap();
        let r_plus = adjoint_rectangular(&r, &f_dom, &f_cod).unwrap();
        assert_eq!(r_plus, l);
        assert_eq!(&r_plus * &r, LinearOperator::identity(order * n));
        assert!(is_symplectic_transformation(&r, &f_dom, &f_cod, 0.0).unwrap().symplectic);
    }

    #[test]
    fn left_shift_is_not_symplectic() {
        let order = 2;
        let n = 6;
        let l = layer_shift_left(order, n);
        let f_dom = SymplecticForm::new(order, n, false).unwrap();
        let f_cod = SymplecticForm::new(order, n - 1, false).unwrap();
        let check = is_symplectic_transformation(&l, &f_dom, &f_cod, 1e-10).unwrap();
        assert!(!check.symplectic);
    }

    #[test]
    fn sign_diagonals_pass_fractional_fail() {
        let n = 4;
        let f = SymplecticForm::new(2, n, false).unwrap();
        let signs = TruncatedVector::new(vec![1.0, -1.0, -1.0, 1.0]).unwrap();
        let tau = diagonal_lift(&signs, 2);
        assert!(is_symplectic_endo(&tau, &f, 0.0).unwrap().symplectic);

        let frac = TruncatedVector::new(vec![1.0, 0.5, 1.0, 1.0]).unwrap();
        let bad = diagonal_lift(&frac, 2);
        assert!(!is_symplectic_endo(&bad, &f, 1e-10).unwrap().symplectic);
    }

    #[test]
    fn transvection_laws() {
        let mut rng = StdRng::seed_from_u64(61);
        let f = SymplecticForm::new(2, 4, false).unwrap();
        let u = DVector::from_fn(f.dim(), |_, _| rng.sample(StandardNormal));
        let (lambda, mu, a) = (0.7, -1.3, 1.9);

        assert_eq!(transvection(&u, 0.0, &f).unwrap(), LinearOperator::identity(f.dim()));

        let t1 = transvection(&u, lambda, &f).unwrap();
        let t2 = transvection(&u, mu, &f).unwrap();
        let combined = transvection(&u, lambda + mu, &f).unwrap();
        assert!((&(&t1 * &t2) - &combined).max_abs() < 1e-12);

        let scaled_u = transvection(&(&u * a), lambda, &f).unwrap();
        let scaled_l = transvection(&u, a * a * lambda, &f).unwrap();
        assert!((&scaled_u - &scaled_l).max_abs() < 1e-12);

        let check = is_symplectic_endo(&t1, &f, 1e-10).unwrap();
        assert!(check.symplectic);

        // norm bound 1 + |lambda| ||G|| ||u||^2
        let bound = 1.0 + lambda.abs() * f.gram().norm() * u.norm_squared();
        assert!(t1.norm_spectral() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn transvection_fixes_annihilator_hyperplane() {
        let f = SymplecticForm::new(2, 3, false).unwrap();
        let u = DVector::from_fn(f.dim(), |i, _| (i + 1) as f64);
        let t = transvection(&u, 2.0, &f).unwrap();
        // any x with form(x, u) = 0 is fixed; build one from the kernel of (Gu)^T
        let gu = f.gram() * &u;
        let kernel = linalg::kernel(&linalg::row_matrix(&gu), 1e-12);
        for j in 0..kernel.ncols() {
            let x = kernel.column(j).into_owned();
            let tx = t.apply(&x).unwrap();
            assert!((tx - &x).amax() < 1e-12);
        }
        assert!(transvection(&DVector::zeros(f.dim()), 1.0, &f).is_err());
    }

    #[test]
    fn upper_triangular_check_cases() {
        let n = 4;
        let id = LinearOperator::identity(n);
        let sym = LinearOperator::from_fn(n, n, |i, j| (i + j) as f64);
        assert!(upper_triangular_symplectic_check(&id, &sym, 1e-12).unwrap().symplectic);

        let mut skew = DMatrix::zeros(n, n);
        skew[(0, 1)] = 1.0;
        skew[(1, 0)] = -1.0;
        let skew = LinearOperator::new(skew).unwrap();
        assert!(!upper_triangular_symplectic_check(&id, &skew, 1e-12).unwrap().symplectic);

        // orthogonal alpha with S = alpha * B for symmetric B
        let mut rng = StdRng::seed_from_u64(67);
        let raw = DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        let alpha = LinearOperator::new(raw.qr().q()).unwrap();
        let b = DMatrix::from_fn(n, n, |i, j| ((i * n + j) % 5) as f64);
        let b = (&b + &b.transpose()) * 0.5;
        let s = LinearOperator::new(alpha.matrix() * b).unwrap();
        let check = upper_triangular_symplectic_check(&alpha, &s, 1e-10).unwrap();
        assert!(check.symplectic);

        // structural test agrees with the direct form test on the assembled pair
        let f = SymplecticForm::new(2, n, false).unwrap();
        let pair = upper_triangular_pair(&alpha, &s).unwrap();
        assert_eq!(
            is_symplectic_endo(&pair, &f, 1e-10).unwrap().symplectic,
            check.symplectic
        );
    }

    #[test]
    fn polar_of_spd_and_orthogonal() {
        let n = 3;
        // symmetric positive definite input: orthogonal factor is the identity
        let spd = DMatrix::from_row_slice(n, n, &[4.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 2.0]);
        let t = LinearOperator::new(spd.clone()).unwrap();
        let polar = polar_symplectic(&t).unwrap();
        assert!((polar.orthogonal.matrix() - DMatrix::identity(n, n)).amax() < 1e-10);
        assert!((polar.positive.matrix() - &spd).amax() < 1e-10);

        // orthogonal input: positive factor is the identity
        let mut rng = StdRng::seed_from_u64(71);
        let raw = DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        let q = raw.qr().q();
        let t = LinearOperator::new(q.clone()).unwrap();
        let polar = polar_symplectic(&t).unwrap();
        assert!((polar.positive.matrix() - DMatrix::identity(n, n)).amax() < 1e-10);
        assert!((polar.orthogonal.matrix() - &q).amax() < 1e-10);

        let f = SymplecticForm::new(2, n, false).unwrap();
        let check = is_symplectic_endo(&polar.embedded, &f, 1e-9).unwrap();
        assert!(check.symplectic);
    }

    #[test]
    fn polar_rejects_singular() {
        let t = LinearOperator::zeros(3, 3);
        assert_eq!(polar_symplectic(&t).err(), Some(Error::SingularMatrix));
    }

    #[test]
    fn range_projection_properties() {
        let mut rng = StdRng::seed_from_u64(73);
        let order = 3;
        let b = random_blocking(&mut rng, 8, 3);
        let f_dom = SymplecticForm::new(order, 3, false).unwrap();
        let f_cod = SymplecticForm::new(order, 8, false).unwrap();
        let t = block_operator(&b, order, 8).unwrap();
        let pi = range_projection(&t, &f_dom, &f_cod).unwrap();
        assert!((&(&pi * &pi) - &pi).max_abs() < 1e-9);
        assert!((&(&pi * &t) - &t).max_abs() < 1e-9);

        // identity blocking projects onto everything
        let f = SymplecticForm::new(2, 4, false).unwrap();
        let id = LinearOperator::identity(f.dim());
        let pi = range_projection(&id, &f, &f).unwrap();
        assert_eq!(pi, id);

        // shift blocking projects onto the shifted coordinates
        let r = layer_shift_right(2, 4);
        let f_dom = SymplecticForm::new(2, 4, false).unwrap();
        let f_cod = SymplecticForm::new(2, 5, false).unwrap();
        let pi = range_projection(&r, &f_dom, &f_cod).unwrap();
        let expected = LinearOperator::from_fn(10, 10, |i, j| {
            if i == j && i % 5 != 0 {
                1.0
            } else {
                0.0
            }
        });
        assert_eq!(pi, expected);
    }

    #[test]
    fn unbounded_map_quasinorm_growth() {
        let n = 10;
        let t = unbounded_symplectic_map(n);
        let f = SymplecticForm::new(2, n, false).unwrap();
        assert!(is_symplectic_endo(&t, &f, 0.0).unwrap().symplectic);
        for k in 1..=n {
            let e = TruncatedVector::unit(n, k - 1);
            let v = crate::vector::RochVector::pair(e.clone(), e).unwrap();
            let image = t.apply_roch(&v).unwrap();
            let q = crate::kp::roch_quasinorm(&image);
            assert!((q - (k + 2) as f64).abs() < 1e-12);
        }
    }
}
