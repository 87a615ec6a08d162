//! Shared dense numerics: kernels, ranks, square roots, the matrix sign
//! function. Everything here is standard machinery; the mathematical content
//! lives in the modules that call it.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// A vector viewed as a one-row matrix, for kernel computations.
pub fn row_matrix(v: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(1, v.len(), |_, j| v[j])
}

/// Numerical rank with a relative singular value threshold.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.singular_values();
    let max = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max.max(1.0)).count()
}

/// Orthonormal basis of the null space of `m`, returned as columns.
///
/// Works from the thin SVD: the leading right singular vectors span the row
/// space, and the kernel is completed from coordinate directions by
/// Gram-Schmidt. This avoids squaring the matrix, which would push genuine
/// kernel directions above any usable threshold.
pub fn kernel(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let d = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(d, d);
    }
    let svd = nalgebra::SVD::new(m.clone(), false, true);
    let sv = &svd.singular_values;
    let max = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    let v_t = svd.v_t.expect("requested");
    let r = if max == 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > tol * max.max(1.0)).count()
    };
    let basis: Vec<DVector<f64>> = (0..r).map(|i| v_t.row(i).transpose()).collect();
    let mut kernel_cols: Vec<DVector<f64>> = Vec::with_capacity(d - r);
    for j in 0..d {
        if kernel_cols.len() == d - r {
            break;
        }
        let mut v: DVector<f64> = DVector::zeros(d);
        v[j] = 1.0;
        // two Gram-Schmidt passes keep the completion orthonormal
        for _ in 0..2 {
            for b in basis.iter().chain(kernel_cols.iter()) {
                let proj = b.dot(&v);
                v -= b * proj;
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            kernel_cols.push(v / n);
        }
    }
    let mut out = DMatrix::zeros(d, kernel_cols.len());
    for (j, c) in kernel_cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Orthonormalizes the columns of `m`, dropping directions below `tol`.
pub fn orthonormal_columns(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for j in 0..m.ncols() {
        let mut v = m.column(j).into_owned();
        for _ in 0..2 {
            for b in &cols {
                let proj = b.dot(&v);
                v -= b * proj;
            }
        }
        let n = v.norm();
        if n > tol {
            cols.push(v / n);
        }
    }
    let mut out = DMatrix::zeros(m.nrows(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Symmetric positive semidefinite square root via eigendecomposition,
/// clamping eigenvalues at `clamp` so near-singular inputs stay invertible.
pub fn sqrt_spd(m: &DMatrix<f64>, clamp: f64) -> DMatrix<f64> {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        d[(i, i)] = eig.eigenvalues[i].max(clamp).sqrt();
    }
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

pub fn complex_eigenvalues(m: &DMatrix<f64>) -> Vec<Complex<f64>> {
    m.complex_eigenvalues().iter().copied().collect()
}

pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    complex_eigenvalues(m).iter().fold(0.0f64, |a, l| a.max(l.norm()))
}

/// Matrix sign function by the determinant-scaled Newton iteration.
/// Requires no eigenvalue on the imaginary axis. Quadratic convergence up
/// to a rounding floor set by the conditioning of the spectral split; the
/// iteration accepts stagnation once the update is already small.
pub fn matrix_sign(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let mut z = m.clone();
    let mut previous_delta = f64::INFINITY;
    for _ in 0..100 {
        let lu = z.clone().lu();
        let det = lu.determinant().abs();
        if det == 0.0 {
            return Err(Error::SingularMatrix);
        }
        let inv = lu.try_inverse().ok_or(Error::SingularMatrix)?;
        let mu = det.powf(-1.0 / n as f64);
        let next = (&z * mu + inv / mu) * 0.5;
        let delta = (&next - &z).amax();
        let scale = next.amax().max(1.0);
        z = next;
        if delta <= 1e-13 * scale {
            return Ok(z);
        }
        // rounding floor: updates stop contracting while already small
        if delta <= 1e-7 * scale && delta > 0.5 * previous_delta {
            return Ok(z);
        }
        previous_delta = delta;
    }
    Err(Error::ConvergenceFailed("matrix sign iteration"))
}

/// Exact antisymmetrization: builds the upper triangle of `(m - m^T) / 2`
/// and mirrors it with negation, so the result satisfies `a + a^T = 0`
/// entry for entry.
pub fn antisymmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (m[(i, j)] - m[(j, i)]) / 2.0;
            out[(i, j)] = v;
            out[(j, i)] = -v;
        }
    }
    out
}

pub fn antisymmetry_defect(m: &DMatrix<f64>) -> f64 {
    (m + m.transpose()).amax()
}

pub fn symmetry_defect(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}
