//! Symplectic linear algebra on finite truncations of twisted Hilbert
//! spaces and their higher-order derived spaces.
//!
//! The crate materializes the order-`n` antidiagonal pairings and their
//! twisted alternating variants on layer-major coordinate tuples, computes
//! adjoints with respect to any of them through structurally exact Gram
//! inverses, and carries an operator catalog (shifts, diagonal lifts,
//! transvections, polar embeddings, block operators built from Kalton-Peck
//! differentials) together with subspace machinery and the constructive
//! repair of almost-alternating dualities. Every closed-form identity has
//! an oracle route next to it so the verification suite can check one
//! against the other.

pub mod adjoint;
pub mod catalog;
pub mod error;
pub mod form;
pub mod kp;
pub mod linalg;
pub mod operator;
pub mod repair;
pub mod subspace;
pub mod vector;

pub use adjoint::{
    adjoint_block2, adjoint_interleaved, adjoint_oracle, adjoint_rectangular,
    adjoint_triangular_n, cstar_failure_witness, is_symplectic_endo,
    is_symplectic_transformation, sharp_adjoint, SharpAdjoint, SymplecticCheck,
};
pub use catalog::{
    block_operator, diagonal_lift, layer_shift_left, layer_shift_right, polar_symplectic,
    range_projection, transvection, unbounded_symplectic_map, upper_triangular_pair,
    upper_triangular_symplectic_check, Blocking, PolarSymplectic, UpperTriangularCheck,
};
pub use error::{Error, Result};
pub use form::{
    check_equivalence, check_equivalence_grams, form_matrix, interleave_permutation, omega_bar,
    omega_n, sigma_apply, tau_sigma, to_interleaved, to_layer_major, ComplexStructure,
    EquivalenceCheck, FormDescriptor, SymplecticForm,
};
pub use kp::{
    kp_differential, roch_quasinorm, sampled_quasinorm_opnorm, taylor_tuple, z2_quasinorm,
};
pub use operator::LinearOperator;
pub use repair::{
    perturbation_equivalence, skew_repair, spectral_projection, spectrum_check, sqrt_series,
    sqrt_series_coefficients, PerturbationEquivalence, RepairMode, RepairResult, SpectrumCheck,
};
pub use subspace::{
    darboux_basis, hyperplane_analysis, is_isotropic, is_symplectic_subspace, max_isotropic,
    max_isotropic_gram, restricted_gram, splits_with_orthogonal, standard_symplectic_gram,
    symplectic_orthogonal, symplectic_orthogonal_dim, HyperplaneAnalysis, Subspace,
};
pub use vector::{l2_norm, RochVector, TruncatedVector};
