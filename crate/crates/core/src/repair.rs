//! Constructive repair of almost-alternating dualities and equivalence of
//! perturbed symplectic structures.
//!
//! `skew_repair` removes the symmetric part of an isomorphism and completes
//! the resulting degenerate alternating form with an explicit pairing of
//! the kernel against a biorthogonal system, landing on the full space when
//! the kernel dimension is even and on a hyperplane when it is odd.
//!
//! `perturbation_equivalence` realizes the equivalence `T^T a T = a + s`
//! through the square-root power series of `S = a^{-1} s` on the part of
//! the spectrum inside the unit disk, followed by a Darboux matching of the
//! finite complements when spectrum lies outside.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::LinearOperator;
use crate::subspace::darboux_basis;

const KERNEL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairMode {
    FullSpace,
    Hyperplane,
}

/// Output of [`skew_repair`]: an exactly alternating, nondegenerate form on
/// the stated space.
#[derive(Debug, Clone)]
pub struct RepairResult {
    /// The antisymmetric part `(alpha - alpha^T) / 2`, exact entry for entry.
    pub beta: LinearOperator,
    /// The completed nondegenerate alternating form: on the full space when
    /// the kernel dimension of `beta` is even, otherwise on the hyperplane
    /// spanned by `hyperplane_basis`.
    pub gamma: LinearOperator,
    pub mode: RepairMode,
    pub kernel_dim: usize,
    /// Orthonormal basis (columns) of the hyperplane carrying `gamma` in
    /// hyperplane mode.
    pub hyperplane_basis: Option<LinearOperator>,
}

/// Antisymmetrizes an invertible map and completes it to a nondegenerate
/// alternating form, on the whole space or a hyperplane according to the
/// parity of the kernel it acquires.
pub fn skew_repair(alpha: &LinearOperator) -> Result<RepairResult> {
    if !alpha.is_square() {
        return Err(Error::NotSquare { rows: alpha.rows(), cols: alpha.cols() });
    }
    let d = alpha.rows();
    let sv = alpha.matrix().singular_values();
    let smin = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if smin <= 1e-12 * smax.max(1.0) {
        return Err(Error::SingularMatrix);
    }

    let beta = linalg::antisymmetrize(alpha.matrix());
    let kernel = linalg::kernel(&beta, KERNEL_TOL);
    let k = kernel.ncols();

    // pair kernel vectors two at a time against their own duals; the
    // orthonormal kernel basis is its own biorthogonal system
    let paired = k - (k % 2);
    let mut completion = DMatrix::zeros(d, d);
    for l in 0..paired / 2 {
        let a = kernel.column(2 * l).into_owned();
        let b = kernel.column(2 * l + 1).into_owned();
        completion += &b * a.transpose() - &a * b.transpose();
    }
    let full = &beta + &completion;

    if k.is_multiple_of(2) {
        // re-mirror so the completed form is antisymmetric entry for entry
        let gamma = LinearOperator::new(linalg::antisymmetrize(&full))?;
        Ok(RepairResult {
            beta: LinearOperator::new(beta)?,
            gamma,
            mode: RepairMode::FullSpace,
            kernel_dim: k,
            hyperplane_basis: None,
        })
    } else {
        // the unpaired kernel direction spans the defect; restrict to its
        // orthogonal complement, a hyperplane on which the form is
        // nondegenerate
        let leftover = kernel.column(k - 1).into_owned();
        let h = linalg::kernel(&linalg::row_matrix(&leftover), KERNEL_TOL);
        let restricted = h.transpose() * &full * &h;
        let gamma = LinearOperator::new(linalg::antisymmetrize(&restricted))?;
        Ok(RepairResult {
            beta: LinearOperator::new(beta)?,
            gamma,
            mode: RepairMode::Hyperplane,
            kernel_dim: k,
            hyperplane_basis: Some(LinearOperator::new(h)?),
        })
    }
}

/// Taylor coefficients of `2(sqrt(1 + z) - 1)`: `a_1 = 1, a_2 = -1/4,
/// a_3 = 1/8, a_4 = -5/64, ...`, by the binomial recurrence.
pub fn sqrt_series_coefficients(count: usize) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(count);
    let mut a = 1.0; // a_1
    for n in 1..=count {
        coeffs.push(a);
        a *= (1.0 - 2.0 * n as f64) / (2.0 * (n as f64 + 1.0));
    }
    coeffs
}

/// Sums the square-root series `R = sum a_n M^n`, which satisfies
/// `R + R^2 / 4 = M`. Requires spectral radius strictly below one; terms
/// are added until they fall below `1e-16` in max norm or 1000 terms.
pub fn sqrt_series(m: &LinearOperator) -> Result<LinearOperator> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let rho = linalg::spectral_radius(m.matrix());
    if rho >= 1.0 {
        return Err(Error::SeriesDivergence(rho));
    }
    let d = m.rows();
    let mut sum = DMatrix::zeros(d, d);
    let mut power = m.matrix().clone();
    let mut a = 1.0; // a_1
    for n in 1..=1000usize {
        let term = &power * a;
        sum += &term;
        if term.amax() < 1e-16 {
            break;
        }
        a *= (1.0 - 2.0 * n as f64) / (2.0 * (n as f64 + 1.0));
        power *= m.matrix();
    }
    LinearOperator::new(sum)
}

/// Real spectral projection onto the generalized eigenspaces of `S` with
/// eigenvalues strictly inside the unit disk.
///
/// Computed as `(I - sign(W)) / 2` where `W = (S - I)(S + I)^{-1}` is the
/// Cayley transform carrying the unit circle to the imaginary axis; the
/// matrix sign function then separates the two spectral halves. All
/// arithmetic is real, so the projection is real by construction; it
/// commutes with `S` and is idempotent. Errors when an eigenvalue sits
/// within `1e-8` of the unit circle.
pub fn spectral_projection(s: &LinearOperator) -> Result<LinearOperator> {
    if !s.is_square() {
        return Err(Error::NotSquare { rows: s.rows(), cols: s.cols() });
    }
    let d = s.rows();
    let eigen = linalg::complex_eigenvalues(s.matrix());
    let mut inside = 0usize;
    for l in &eigen {
        let dist = (l.norm() - 1.0).abs();
        if dist < 1e-8 {
            return Err(Error::EigenvalueOnContour(dist));
        }
        if l.norm() < 1.0 {
            inside += 1;
        }
    }
    if inside == d {
        return Ok(LinearOperator::identity(d));
    }
    if inside == 0 {
        return Ok(LinearOperator::zeros(d, d));
    }
    let id = DMatrix::identity(d, d);
    let shifted = s.matrix() + &id;
    let cayley_inv = shifted.lu().try_inverse().ok_or(Error::SingularMatrix)?;
    let w = (s.matrix() - &id) * cayley_inv;
    let sign = linalg::matrix_sign(&w)?;
    let mut p = (&id - &sign) * 0.5;
    // one idempotency refinement step: a polynomial in p, so commutation
    // with s is untouched
    if (&p * &p - &p).amax() > 1e-13 {
        p = &p * &p * 3.0 - &p * &p * &p * 2.0;
    }
    LinearOperator::new(p)
}

/// Result of the constructive equivalence between a symplectic duality and
/// its perturbation.
#[derive(Debug, Clone)]
pub struct PerturbationEquivalence {
    /// Invertible `T` with `T^T alpha T = alpha + s` within tolerance.
    pub transform: LinearOperator,
    /// Max-entry defect of the target identity.
    pub residual: f64,
    /// Defect of the intermediate identity
    /// `(P + R/2)^T alpha (P + R/2) = P^T (alpha + s) P`.
    pub partial_residual: f64,
    /// Rank of the spectral projection used.
    pub projection_rank: usize,
    /// Whether the finite complement had to be matched separately.
    pub used_complement: bool,
}

const EQUIVALENCE_TOL: f64 = 1e-8;

/// Builds an explicit equivalence between the alternating dualities
/// `alpha` and `alpha + s`: with `S = alpha^{-1} s`, the series transform
/// `T1 = I + R/2` realizes the identity on the spectral part of `S` inside
/// the unit disk, and the finite complements are matched by Darboux bases
/// of the two restricted forms.
pub fn perturbation_equivalence(
    alpha: &LinearOperator,
    s: &LinearOperator,
) -> Result<PerturbationEquivalence> {
    if !alpha.is_square() || !s.is_square() || alpha.rows() != s.rows() {
        return Err(Error::DimensionMismatch {
            context: "perturbation equivalence",
            expected: alpha.rows(),
            found: s.rows(),
        });
    }
    let d = alpha.rows();
    for m in [alpha, &(alpha + s)] {
        let defect = linalg::antisymmetry_defect(m.matrix());
        if defect > 1e-10 * m.max_abs().max(1.0) {
            return Err(Error::NotAntisymmetric(defect));
        }
    }
    let alpha_inv = alpha.try_inverse()?;
    let perturbed = alpha + s;
    {
        let sv = perturbed.matrix().singular_values();
        let smin = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
        if smin <= 1e-12 * smax.max(1.0) {
            return Err(Error::SingularMatrix);
        }
    }
    let big_s = &alpha_inv * s;
    let p = spectral_projection(&big_s)?;
    let projection_rank = p.matrix().trace().round() as usize;

    let sp = &big_s * &p;
    let r = sqrt_series(&sp)?;
    let t1 = &LinearOperator::identity(d) + &r.scale(0.5);

    // intermediate identity from the series construction
    let p_half_r = &p + &r.scale(0.5);
    let partial_lhs = p_half_r.matrix().transpose() * alpha.matrix() * p_half_r.matrix();
    let partial_rhs = p.matrix().transpose() * perturbed.matrix() * p.matrix();
    let partial_residual = (&partial_lhs - &partial_rhs).amax();

    if projection_rank == d {
        let residual =
            (t1.matrix().transpose() * alpha.matrix() * t1.matrix() - perturbed.matrix()).amax();
        if residual > EQUIVALENCE_TOL {
            return Err(Error::ResidualTooLarge {
                check: "perturbation equivalence",
                residual,
                tolerance: EQUIVALENCE_TOL,
            });
        }
        return Ok(PerturbationEquivalence {
            transform: t1,
            residual,
            partial_residual,
            projection_rank,
            used_complement: false,
        });
    }

    // complement branch: pick the transform domain inside the image of P,
    // orthogonally to whatever kernel the pulled-back form acquired
    let beta = t1.matrix().transpose() * alpha.matrix() * t1.matrix();
    let beta_kernel = linalg::kernel(&beta, KERNEL_TOL);
    let p_image = linalg::orthonormal_columns(p.matrix(), 1e-8);
    let x1 = if beta_kernel.ncols() == 0 {
        p_image
    } else {
        // project the image of P away from ker(beta)
        let mut projected = p_image.clone();
        for j in 0..projected.ncols() {
            let mut col = projected.column(j).into_owned();
            for kcol in 0..beta_kernel.ncols() {
                let kvec = beta_kernel.column(kcol);
                let proj = kvec.dot(&col);
                col -= kvec * proj;
            }
            projected.set_column(j, &col);
        }
        linalg::orthonormal_columns(&projected, 1e-8)
    };

    // complements: orthogonal of X1 under the perturbed form, and of T1 X1
    // under the original form
    let omega_complement = form_orthogonal(&x1, perturbed.matrix());
    let t1x1 = t1.matrix() * &x1;
    let omega_image_complement = form_orthogonal(&t1x1, alpha.matrix());
    if omega_complement.ncols() != omega_image_complement.ncols() {
        return Err(Error::ComplementMismatch {
            left: omega_complement.ncols(),
            right: omega_image_complement.ncols(),
        });
    }

    // Darboux bases of the two restricted complement forms
    let g1 = omega_complement.transpose() * perturbed.matrix() * &omega_complement;
    let g2 = omega_image_complement.transpose() * alpha.matrix() * &omega_image_complement;
    let c1 = darboux_basis(&linalg::antisymmetrize(&g1), 1e-10)?;
    let c2 = darboux_basis(&linalg::antisymmetrize(&g2), 1e-10)?;
    let dom_complement = &omega_complement * c1;
    let cod_complement = &omega_image_complement * c2;

    // assemble T by matching [X1 | C1] to [T1 X1 | C2]
    let k = x1.ncols();
    let c = dom_complement.ncols();
    let mut domain = DMatrix::zeros(d, k + c);
    domain.view_mut((0, 0), (d, k)).copy_from(&x1);
    domain.view_mut((0, k), (d, c)).copy_from(&dom_complement);
    let mut image = DMatrix::zeros(d, k + c);
    image.view_mut((0, 0), (d, k)).copy_from(&t1x1);
    image.view_mut((0, k), (d, c)).copy_from(&cod_complement);
    let domain_inv = domain.lu().try_inverse().ok_or(Error::SingularMatrix)?;
    let t = image * domain_inv;

    let residual = (t.transpose() * alpha.matrix() * &t - perturbed.matrix()).amax();
    if residual > EQUIVALENCE_TOL {
        return Err(Error::ResidualTooLarge {
            check: "perturbation equivalence (complement branch)",
            residual,
            tolerance: EQUIVALENCE_TOL,
        });
    }
    Ok(PerturbationEquivalence {
        transform: LinearOperator::new(t)?,
        residual,
        partial_residual,
        projection_rank,
        used_complement: true,
    })
}

/// Orthogonal of the column span of `basis` under the bilinear form with
/// Gram matrix `gram`, as orthonormal columns.
fn form_orthogonal(basis: &DMatrix<f64>, gram: &DMatrix<f64>) -> DMatrix<f64> {
    let constraint = basis.transpose() * gram.transpose();
    linalg::kernel(&constraint, KERNEL_TOL)
}

/// Eigenvalues of a map that is skew with respect to the inner product
/// induced by an SPD matrix `G`.
#[derive(Debug, Clone)]
pub struct SpectrumCheck {
    pub eigenvalues: Vec<Complex<f64>>,
    pub max_real_part: f64,
}

const SPECTRUM_TOL: f64 = 1e-8;

/// Verifies that a `G`-skew map has purely imaginary spectrum: `G` must be
/// symmetric positive definite and `G * alpha` antisymmetric (within
/// `1e-10`), which encodes skewness for the inner product `<x, G y>`. The
/// eigenvalues of `alpha` are returned; real parts beyond `1e-8` are an
/// error.
pub fn spectrum_check(alpha: &LinearOperator, g: &LinearOperator) -> Result<SpectrumCheck> {
    if !alpha.is_square() || !g.is_square() || alpha.rows() != g.rows() {
        return Err(Error::DimensionMismatch {
            context: "spectrum check",
            expected: alpha.rows(),
            found: g.rows(),
        });
    }
    let sym_defect = linalg::symmetry_defect(g.matrix());
    if sym_defect > 1e-10 * g.max_abs().max(1.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let eig = nalgebra::SymmetricEigen::new(g.matrix().clone());
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let product = g.matrix() * alpha.matrix();
    let defect = linalg::antisymmetry_defect(&product);
    if defect > 1e-10 * product.amax().max(1.0) {
        return Err(Error::NotAntisymmetric(defect));
    }
    let eigenvalues = linalg::complex_eigenvalues(alpha.matrix());
    let max_real_part = eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.re.abs()));
    if max_real_part > SPECTRUM_TOL {
        return Err(Error::SpectrumRealPart(max_real_part));
    }
    Ok(SpectrumCheck { eigenvalues, max_real_part })
}
