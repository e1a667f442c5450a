//! Noisy QND gate models built from solved input-output relations.
//!
//! Every gate is a linear map from raw modes (two signal inputs plus
//! auxiliary temporal modes, loss vacua, intracavity initial values and
//! thermal-force modes) to the four output quadratures.

pub mod basis;
pub mod constants;
pub mod error;
pub mod model;
pub mod params;

pub use basis::{apply_squeezing, orthogonalize_noise_modes, ModeRole, NoiseModeBasis, SqueezingConvention};
pub use constants::{
    atom_light_constants, atom_light_constants_quadrature, atom_mech_constants, atom_mech_constants_quadrature,
    atom_mech_gain, thermal_force_constants, thermal_force_constants_quadrature, AtomMechConstants, PulseConstants,
    ThermalForceConstants,
};
pub use error::GateError;
pub use model::{
    build_atom_light_gate, build_atom_mech_gate, build_atom_mech_gate_with, build_optomech_gate, EffectiveGains,
    GateConstants, GateKind, GateModel,
};
pub use params::{AtomLightParams, AtomMechParams, OptomechParams, MAX_SQUEEZING_DB};
