use std::fmt;

/// Errors reported by construction and verification routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must share a dimension do not.
    DimensionMismatch { context: &'static str, expected: usize, found: usize },
    /// A vector or matrix entry is NaN or infinite.
    NonFinite,
    /// Vectors must have dimension at least one.
    EmptyVector,
    /// A covector, direction or block coefficient is identically zero.
    ZeroVector,
    /// The complex structure pairs coordinates, so the dimension must be even.
    OddTruncation(usize),
    /// Twisted forms exist only for odd order on even truncations.
    InvalidForm { order: usize, truncation: usize, twisted: bool },
    /// Operation requires a square operator.
    NotSquare { rows: usize, cols: usize },
    /// Strictly lower layer blocks must vanish.
    NotUpperTriangular,
    /// A matrix that must be antisymmetric is not; carries the defect.
    NotAntisymmetric(f64),
    /// A matrix that must be symmetric positive definite is not.
    NotPositiveDefinite,
    /// A matrix that must be invertible is numerically singular.
    SingularMatrix,
    /// A subspace basis does not have full column rank.
    RankDeficientBasis,
    /// Block supports overlap, leave gaps or do not start at the first coordinate.
    InvalidSupports,
    /// A block coefficient vector is not unit norm or escapes its support.
    InvalidCoefficient { block: usize, detail: &'static str },
    /// The blocking does not fit inside the requested codomain truncation.
    BlockingTooLarge { needed: usize, available: usize },
    /// Power series requires spectral radius strictly below one.
    SeriesDivergence(f64),
    /// An eigenvalue sits too close to the unit circle for spectral splitting.
    EigenvalueOnContour(f64),
    /// The spectrum of a skew map acquired a real part beyond tolerance.
    SpectrumRealPart(f64),
    /// A constructive identity failed to verify within tolerance.
    ResidualTooLarge { check: &'static str, residual: f64, tolerance: f64 },
    /// The two complement forms in the equivalence construction have different ranks.
    ComplementMismatch { left: usize, right: usize },
    /// An iterative eigen/sign computation did not converge.
    ConvergenceFailed(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { context, expected, found } => {
                write!(f, "dimension mismatch in {context}: expected {expected}, found {found}")
            }
            Error::NonFinite => write!(f, "entries must be finite (no NaN or infinity)"),
            Error::EmptyVector => write!(f, "vectors must have dimension at least 1"),
            Error::ZeroVector => write!(f, "vector must be nonzero"),
            Error::OddTruncation(n) => {
                write!(f, "complex structure needs an even dimension, got {n}")
            }
            Error::InvalidForm { order, truncation, twisted } => write!(
                f,
                "invalid form parameters: order {order}, truncation {truncation}, twisted {twisted} \
                 (twisted requires odd order and even truncation)"
            ),
            Error::NotSquare { rows, cols } => {
                write!(f, "operator must be square, got {rows}x{cols}")
            }
            Error::NotUpperTriangular => {
                write!(f, "operator must be block upper triangular in layer blocks")
            }
            Error::NotAntisymmetric(defect) => {
                write!(f, "matrix must be antisymmetric (defect {defect:.3e})")
            }
            Error::NotPositiveDefinite => {
                write!(f, "matrix must be symmetric positive definite")
            }
            Error::SingularMatrix => write!(f, "matrix is singular"),
            Error::RankDeficientBasis => write!(f, "subspace basis is rank deficient"),
            Error::InvalidSupports => {
                write!(f, "supports must be disjoint, consecutive and cover a prefix")
            }
            Error::InvalidCoefficient { block, detail } => {
                write!(f, "invalid coefficient vector for block {block}: {detail}")
            }
            Error::BlockingTooLarge { needed, available } => {
                write!(f, "blocking needs truncation {needed} but codomain has {available}")
            }
            Error::SeriesDivergence(rho) => {
                write!(f, "series requires spectral radius < 1, got {rho:.6}")
            }
            Error::EigenvalueOnContour(dist) => {
                write!(f, "eigenvalue within {dist:.3e} of the unit circle")
            }
            Error::SpectrumRealPart(re) => {
                write!(f, "spectrum acquired real part {re:.3e} beyond tolerance")
            }
            Error::ResidualTooLarge { check, residual, tolerance } => {
                write!(f, "{check}: residual {residual:.3e} exceeds tolerance {tolerance:.1e}")
            }
            Error::ComplementMismatch { left, right } => {
                write!(f, "complement dimensions differ: {left} vs {right}")
            }
            Error::ConvergenceFailed(what) => write!(f, "{what} did not converge"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
