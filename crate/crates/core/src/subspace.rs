//! Symplectic orthogonals, isotropic and symplectic subspace predicates,
//! the hyperplane decomposition, and greedy Darboux-style constructions.

use nalgebra::{DMatrix, DVector};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::form::SymplecticForm;
use crate::linalg;

/// Default tolerance for rank decisions on stacked bases.
pub const RANK_TOL: f64 = 1e-10;

/// A subspace given by a basis of linearly independent columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        if basis.ncols() == 0 || basis.nrows() == 0 {
            return Err(Error::EmptyVector);
        }
        if basis.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if linalg::rank(&basis, RANK_TOL) != basis.ncols() {
            return Err(Error::RankDeficientBasis);
        }
        Ok(Self { ambient: basis.nrows(), basis })
    }

    pub fn from_columns(columns: &[DVector<f64>]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::EmptyVector);
        }
        let ambient = columns[0].len();
        let mut basis = DMatrix::zeros(ambient, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != ambient {
                return Err(Error::DimensionMismatch {
                    context: "subspace columns",
                    expected: ambient,
                    found: c.len(),
                });
            }
            basis.set_column(j, c);
        }
        Self::new(basis)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Containment by a rank test on the stacked bases.
    pub fn contains(&self, other: &Subspace, tol: f64) -> bool {
        if self.ambient != other.ambient {
            return false;
        }
        let mut stacked = DMatrix::zeros(self.ambient, self.dim() + other.dim());
        stacked.view_mut((0, 0), (self.ambient, self.dim())).copy_from(&self.basis);
        stacked
            .view_mut((0, self.dim()), (self.ambient, other.dim()))
            .copy_from(&other.basis);
        linalg::rank(&stacked, tol) == self.dim()
    }

    /// Mutual containment.
    pub fn equals(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.contains(other, tol) && other.contains(self, tol)
    }

    pub fn orthonormalized(&self) -> Subspace {
        Subspace {
            ambient: self.ambient,
            basis: linalg::orthonormal_columns(&self.basis, 1e-12),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient: usize,
    /// Basis vectors listed one after another; stacked as columns.
    basis: Vec<Vec<f64>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient: self.ambient,
            basis: (0..self.dim())
                .map(|j| self.basis.column(j).iter().copied().collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(deserializer)?;
        if repr.basis.is_empty() || repr.basis.iter().any(|c| c.len() != repr.ambient) {
            return Err(D::Error::custom("basis vectors must match the ambient dimension"));
        }
        let columns: Vec<DVector<f64>> =
            repr.basis.into_iter().map(DVector::from_vec).collect();
        Subspace::from_columns(&columns).map_err(D::Error::custom)
    }
}

/// The symplectic orthogonal: all vectors pairing to zero with the whole
/// subspace, computed as the kernel of `B^T G^T`. Dimensions are
/// complementary and the double orthogonal recovers the subspace.
pub fn symplectic_orthogonal(f_sub: &Subspace, form: &SymplecticForm) -> Result<Subspace> {
    if f_sub.ambient() != form.dim() {
        return Err(Error::DimensionMismatch {
            context: "symplectic orthogonal",
            expected: form.dim(),
            found: f_sub.ambient(),
        });
    }
    let constraint = f_sub.basis().transpose() * form.gram().transpose();
    let kernel = linalg::kernel(&constraint, RANK_TOL);
    if kernel.ncols() == 0 {
        // the whole space pairs nontrivially with everything: orthogonal is zero,
        // which has no basis representation; callers check dim first
        return Err(Error::RankDeficientBasis);
    }
    Subspace::new(kernel)
}

/// Dimension of the symplectic orthogonal without requiring it be nonzero.
pub fn symplectic_orthogonal_dim(f_sub: &Subspace, form: &SymplecticForm) -> Result<usize> {
    if f_sub.ambient() != form.dim() {
        return Err(Error::DimensionMismatch {
            context: "symplectic orthogonal",
            expected: form.dim(),
            found: f_sub.ambient(),
        });
    }
    let constraint = f_sub.basis().transpose() * form.gram().transpose();
    Ok(form.dim() - linalg::rank(&constraint, RANK_TOL))
}

/// Isotropy: every pairing inside the subspace vanishes.
pub fn is_isotropic(f_sub: &Subspace, form: &SymplecticForm, tol: f64) -> Result<bool> {
    Ok(restricted_gram(f_sub, form)?.amax() <= tol)
}

/// The restriction of the form to the subspace in its basis coordinates.
pub fn restricted_gram(f_sub: &Subspace, form: &SymplecticForm) -> Result<DMatrix<f64>> {
    if f_sub.ambient() != form.dim() {
        return Err(Error::DimensionMismatch {
            context: "restricted form",
            expected: form.dim(),
            found: f_sub.ambient(),
        });
    }
    Ok(f_sub.basis().transpose() * form.gram() * f_sub.basis())
}

/// A subspace is symplectic when the restricted form is nondegenerate.
pub fn is_symplectic_subspace(f_sub: &Subspace, form: &SymplecticForm, tol: f64) -> Result<bool> {
    let restricted = restricted_gram(f_sub, form)?;
    Ok(linalg::rank(&restricted, tol) == f_sub.dim())
}

/// Second route to the same predicate: the subspace together with its
/// symplectic orthogonal spans the ambient space. The two routes must
/// agree; tests and the verification suite check both.
pub fn splits_with_orthogonal(f_sub: &Subspace, form: &SymplecticForm, tol: f64) -> Result<bool> {
    let ortho_dim = symplectic_orthogonal_dim(f_sub, form)?;
    if ortho_dim == 0 {
        return Ok(f_sub.dim() == form.dim());
    }
    let ortho = symplectic_orthogonal(f_sub, form)?;
    let mut stacked = DMatrix::zeros(form.dim(), f_sub.dim() + ortho.dim());
    stacked.view_mut((0, 0), (form.dim(), f_sub.dim())).copy_from(f_sub.basis());
    stacked
        .view_mut((0, f_sub.dim()), (form.dim(), ortho.dim()))
        .copy_from(ortho.basis());
    Ok(linalg::rank(&stacked, tol) == form.dim())
}

/// Diagnostics from the hyperplane decomposition.
#[derive(Debug, Clone)]
pub struct HyperplaneAnalysis {
    /// Solution of `L_omega(x0) = g`; lies inside the hyperplane.
    pub x0: DVector<f64>,
    /// A symplectic subspace of the hyperplane with codimension one in it.
    pub h_prime: Subspace,
    /// Value `g(x0)`; vanishes because the form is alternating.
    pub g_of_x0: f64,
    /// Dimension of the symplectic orthogonal of the hyperplane; one.
    pub orthogonal_dim: usize,
    /// Distance between the orthogonal line and the span of `x0`,
    /// measured as an alignment defect of unit vectors.
    pub collinearity_defect: f64,
    /// Whether the constructed subspace passed the symplectic test.
    pub h_prime_symplectic: bool,
}

/// Decomposes the hyperplane `H = ker g` of an alternating nondegenerate
/// form: finds `x0` with `L_omega(x0) = g` (so the orthogonal of `H` is
/// the line through `x0`, inside `H`), and produces a symplectic
/// `H' = H intersect H1` of codimension one in `H`, where `H1` is the
/// pairing-annihilator of a vector `x1` outside `H`.
pub fn hyperplane_analysis(
    g: &DVector<f64>,
    form: &SymplecticForm,
    tol: f64,
) -> Result<HyperplaneAnalysis> {
    if g.len() != form.dim() {
        return Err(Error::DimensionMismatch {
            context: "hyperplane covector",
            expected: form.dim(),
            found: g.len(),
        });
    }
    if g.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroVector);
    }
    if !form.is_alternating() {
        return Err(Error::NotAntisymmetric(linalg::antisymmetry_defect(form.gram())));
    }
    let d = form.dim();
    // L_omega(x)(y) = x^T G y, so the covector of x is G^T x and
    // x0 = (G^T)^{-1} g = (G^{-1})^T g, exact through the structural inverse.
    let x0 = form.gram_inverse().transpose() * g;
    let g_of_x0 = g.dot(&x0);

    // H = ker g
    let h_basis = linalg::kernel(&linalg::row_matrix(g), RANK_TOL);
    let h = Subspace::new(h_basis)?;
    let orthogonal = symplectic_orthogonal(&h, form)?;
    let orthogonal_dim = orthogonal.dim();

    // alignment of the orthogonal line with x0
    let collinearity_defect = if orthogonal_dim == 1 {
        let line = orthogonal.basis().column(0).into_owned();
        let unit_line = &line / line.norm();
        let unit_x0 = &x0 / x0.norm();
        let dot = unit_line.dot(&unit_x0).abs();
        (1.0 - dot).abs()
    } else {
        f64::INFINITY
    };

    // x1: the coordinate direction with the largest |g| component stays
    // outside H deterministically
    let mut best = 0;
    for i in 0..d {
        if g[i].abs() > g[best].abs() {
            best = i;
        }
    }
    let mut x1 = DVector::zeros(d);
    x1[best] = 1.0;
    // H1 = annihilator of x1: kernel of the covector G^T x1
    let x1_covector = (form.gram().transpose() * &x1).transpose().into_owned();
    // H' = H intersect H1: kernel of the stacked constraints
    let mut constraints = DMatrix::zeros(2, d);
    constraints.row_mut(0).copy_from(&g.transpose());
    constraints.row_mut(1).copy_from(&x1_covector.row(0));
    let h_prime = Subspace::new(linalg::kernel(&constraints, RANK_TOL))?;
    let h_prime_symplectic = is_symplectic_subspace(&h_prime, form, tol)?;

    Ok(HyperplaneAnalysis {
        x0,
        h_prime,
        g_of_x0,
        orthogonal_dim,
        collinearity_defect,
        h_prime_symplectic,
    })
}

/// Greedy symplectic Gram-Schmidt on an alternating nondegenerate Gram
/// matrix of even size `2m`: returns `C` with `C^T G C` in standard form
/// (rotation blocks down the diagonal, pairs interleaved). The pivot is
/// the largest remaining pairing magnitude, ties broken by lowest index.
pub fn darboux_basis(gram: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let d = gram.nrows();
    if gram.ncols() != d {
        return Err(Error::NotSquare { rows: gram.nrows(), cols: gram.ncols() });
    }
    if !d.is_multiple_of(2) {
        return Err(Error::OddTruncation(d));
    }
    let defect = linalg::antisymmetry_defect(gram);
    if defect > 1e-10 * gram.amax().max(1.0) {
        return Err(Error::NotAntisymmetric(defect));
    }
    let m = d / 2;
    let mut working = DMatrix::<f64>::identity(d, d);
    let mut pairs: Vec<(DVector<f64>, DVector<f64>)> = Vec::with_capacity(m);
    for _ in 0..m {
        // all remaining pairings in one table, then the largest entry
        let table = working.transpose() * gram * &working;
        let t = working.ncols();
        let mut best = (0usize, 1usize);
        let mut best_val = 0.0f64;
        for i in 0..t {
            for j in (i + 1)..t {
                let v = table[(i, j)].abs();
                if v > best_val {
                    best_val = v;
                    best = (i, j);
                }
            }
        }
        if best_val <= tol {
            return Err(Error::SingularMatrix);
        }
        let a = working.column(best.0).into_owned();
        let omega_ab = table[(best.0, best.1)];
        let b = working.column(best.1).into_owned() / omega_ab;
        // project the rest into the symplectic complement of span{a, b}:
        // v -> v - omega(v, b) a + omega(v, a) b, with both pairings read
        // off the table
        let mut rest = DMatrix::zeros(d, t - 2);
        let mut col = 0;
        for idx in 0..t {
            if idx == best.0 || idx == best.1 {
                continue;
            }
            let omega_vb = table[(idx, best.1)] / omega_ab;
            let omega_va = table[(idx, best.0)];
            let corrected = working.column(idx) - &a * omega_vb + &b * omega_va;
            rest.set_column(col, &corrected);
            col += 1;
        }
        // re-orthonormalize in the Euclidean sense for conditioning; the
        // span, and with it the symplectic complement property, is preserved
        working = if rest.ncols() > 0 {
            linalg::orthonormal_columns(&rest, 1e-12)
        } else {
            rest
        };
        pairs.push((a, b));
    }
    let mut c = DMatrix::zeros(d, d);
    for (k, (a, b)) in pairs.iter().enumerate() {
        c.set_column(2 * k, a);
        c.set_column(2 * k + 1, b);
    }
    Ok(c)
}

/// The standard alternating Gram matrix of size `2m` with interleaved
/// rotation blocks.
pub fn standard_symplectic_gram(m: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        g[(2 * k, 2 * k + 1)] = 1.0;
        g[(2 * k + 1, 2 * k)] = -1.0;
    }
    g
}

/// A maximal isotropic subspace (dimension exactly half) of an alternating
/// nondegenerate Gram matrix, from the first member of each greedy Darboux
/// pair. Finite truncations always have one; its interest lies in how badly
/// the quasinorm projects onto it as the truncation grows.
pub fn max_isotropic_gram(gram: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let c = darboux_basis(gram, tol)?;
    let m = gram.nrows() / 2;
    let mut basis = DMatrix::zeros(gram.nrows(), m);
    for k in 0..m {
        basis.set_column(k, &c.column(2 * k).into_owned());
    }
    Ok(basis)
}

/// Maximal isotropic subspace of a materialized alternating form.
pub fn max_isotropic(form: &SymplecticForm) -> Result<Subspace> {
    if !form.is_alternating() {
        return Err(Error::NotAntisymmetric(linalg::antisymmetry_defect(form.gram())));
    }
    Subspace::new(max_isotropic_gram(form.gram(), 1e-12)?)
}
