//! Hong-Ou-Mandel bunching element for QND gate outputs.

pub mod element;
pub mod error;

pub use element::{
    coherent_gaussian_element, coherent_output_element, coherent_output_element_at, hom_element_for_gate,
    hom_element_ideal_via_wigner, HomResult, InputSpec, TermContribution, DEFAULT_OCCUPATION,
};
pub use error::HomError;
