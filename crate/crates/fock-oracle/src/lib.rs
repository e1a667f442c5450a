//! Exact ideal-gate HOM elements on a truncated two-mode Fock space.

pub mod basis;
pub mod closed_form;
pub mod error;
pub mod operator;

pub use basis::{FockBasisSpec, TruncatedState, C64};
pub use closed_form::{
    closed_form_bs_11, closed_form_qnd_00, closed_form_qnd_11, coherent_hom_element,
    hom_element_mixture_ideal, optimal_qnd_gain,
};
pub use error::FockError;
pub use operator::{
    build_bs_unitary, build_qnd_unitary, build_qnd_unitary_unchecked, hom_element_exact, hom_plus_element_exact,
    qnd_action_taylor, TruncatedOperator,
};
