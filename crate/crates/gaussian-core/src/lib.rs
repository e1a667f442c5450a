//! Gaussian-state machinery for HOM matrix elements.
//!
//! States and projectors are written as signed combinations of Gaussian
//! Wigner functions; matrix elements reduce to sums of Gaussian overlaps.

pub mod combo;
pub mod convention;
pub mod dd;
pub mod error;
pub mod overlap;

pub use combo::{
    hom_projector_combo, input_state_combo, mode_mixture, product_combo, push_combo,
    single_photon_combo, CovarianceMatrix, GaussianCombo, GaussianTerm, ModeComponent,
    MAX_OCCUPATION,
};
pub use convention::{
    bs_matrix, is_physical, min_physical_eigenvalue, omega, qnd_matrix, thermal_covariance,
    LinearQuadratureMap, QuadratureVector, COMMUTATOR_SCALE, VACUUM_VARIANCE,
};
pub use dd::Dd;
pub use error::CoreError;
pub use overlap::{gaussian_overlap, matrix_element, matrix_element_dd, pair_contributions, MAX_CONDITION};
