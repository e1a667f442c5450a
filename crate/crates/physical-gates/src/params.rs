//! Physical parameters, all rates in units of the cavity linewidth κ.

use serde::{Deserialize, Serialize};

use crate::error::GateError;

pub const MAX_SQUEEZING_DB: f64 = 20.0;

fn positive(name: &str, v: f64) -> Result<(), GateError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(GateError::Domain(format!("{name} = {v} must be positive and finite")))
    }
}

fn efficiency(v: f64) -> Result<(), GateError> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(GateError::Domain(format!("eta = {v} outside (0, 1]")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<(), GateError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(GateError::Domain(format!("{name} = {v} must be non-negative")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomLightParams {
    pub g_over_kappa: f64,
    pub kappa_tau: f64,
    pub eta: f64,
}

impl AtomLightParams {
    pub fn validate(&self) -> Result<(), GateError> {
        positive("g_over_kappa", self.g_over_kappa)?;
        positive("kappa_tau", self.kappa_tau)?;
        efficiency(self.eta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptomechParams {
    pub g_over_kappa: f64,
    pub kappa_tau: f64,
    pub eta: f64,
    pub gamma_over_kappa: f64,
}

impl OptomechParams {
    pub fn validate(&self) -> Result<(), GateError> {
        positive("g_over_kappa", self.g_over_kappa)?;
        positive("kappa_tau", self.kappa_tau)?;
        efficiency(self.eta)?;
        non_negative("gamma_over_kappa", self.gamma_over_kappa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomMechParams {
    pub ga_over_kappa: f64,
    pub gm_over_kappa: f64,
    pub kappa_tau: f64,
    pub eta: f64,
    pub gamma_over_kappa: f64,
    pub squeezing_db: f64,
}

impl AtomMechParams {
    pub fn validate(&self) -> Result<(), GateError> {
        positive("ga_over_kappa", self.ga_over_kappa)?;
        positive("gm_over_kappa", self.gm_over_kappa)?;
        positive("kappa_tau", self.kappa_tau)?;
        efficiency(self.eta)?;
        non_negative("gamma_over_kappa", self.gamma_over_kappa)?;
        if !(0.0..=MAX_SQUEEZING_DB).contains(&self.squeezing_db) {
            return Err(GateError::Domain(format!(
                "squeezing_db = {} outside [0, {MAX_SQUEEZING_DB}]",
                self.squeezing_db
            )));
        }
        Ok(())
    }
}
