//! Phase-randomized input threshold.

use std::fmt;

use physical_gates::GateModel;

use crate::error::ThresholdError;
use crate::kernel::CoherentKernel;
use crate::search::simplex_maximize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAverageOptions {
    /// Trapezoid samples per phase angle.
    pub samples: usize,
    /// Amplitudes are searched on `[0, domain]` per mode.
    pub domain: f64,
    /// Coarse grid points per amplitude axis.
    pub grid: usize,
    pub iterations: u64,
    pub tolerance: f64,
    /// Base occupation of the photon approximation in the projector.
    pub n: f64,
}

impl Default for PhaseAverageOptions {
    fn default() -> Self {
        Self { samples: 64, domain: 6.0, grid: 25, iterations: 200, tolerance: 1e-8, n: 1e-3 }
    }
}

impl PhaseAverageOptions {
    pub fn validate(&self) -> Result<(), ThresholdError> {
        if self.samples < 16 || !self.samples.is_multiple_of(2) {
            return Err(ThresholdError::Domain(format!("phase samples {} must be even and >= 16", self.samples)));
        }
        if !(self.domain >= 4.0 && self.domain.is_finite()) {
            return Err(ThresholdError::Domain(format!("amplitude domain {} must be >= 4", self.domain)));
        }
        if self.grid < 3 {
            return Err(ThresholdError::Domain(format!("grid resolution {} must be >= 3", self.grid)));
        }
        if !(self.tolerance > 0.0) {
            return Err(ThresholdError::Domain("simplex tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Phase-average change below which the integral counts as converged.
pub const PHASE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdWarning {
    /// Doubling the phase samples twice still moved the value by `change`.
    PhaseAccuracy { change: f64 },
    /// The maximizing amplitudes sit on the search-domain edge.
    Boundary { ra: f64, rb: f64 },
}

impl fmt::Display for ThresholdWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PhaseAccuracy { change } => write!(f, "phase-average-unconverged({change:.1e})"),
            Self::Boundary { ra, rb } => write!(f, "threshold-at-domain-boundary({ra:.3},{rb:.3})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub value: f64,
    /// Maximizing amplitudes `(|α|, |β|)`.
    pub argmax: (f64, f64),
    pub samples: usize,
    pub converged: bool,
    pub warnings: Vec<ThresholdWarning>,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    ra: f64,
    rb: f64,
    value: f64,
}

/// Largest phase-averaged HOM element over coherent input amplitudes.
pub fn input_threshold(model: &GateModel, opts: &PhaseAverageOptions) -> Result<ThresholdResult, ThresholdError> {
    opts.validate()?;
    let kernel = CoherentKernel::new(model, opts.n)?;
    let dom = opts.domain;
    let averaged = |ra: f64, rb: f64, samples: usize| kernel.phase_average(ra, rb, samples, 0.0);
    // negative amplitudes are a phase shift by π
    let fold = |r: f64| r.abs().min(dom);
    let objective = |p: &[f64]| -> Result<f64, std::convert::Infallible> {
        Ok(averaged(fold(p[0]), fold(p[1]), opts.samples))
    };

    let h = dom / (opts.grid - 1) as f64;
    let mut cells = Vec::with_capacity(opts.grid * opts.grid);
    for i in 0..opts.grid {
        for j in 0..opts.grid {
            let (ra, rb) = (i as f64 * h, j as f64 * h);
            cells.push(Cell { ra, rb, value: averaged(ra, rb, opts.samples) });
        }
    }
    // stable sort keeps grid order among ties
    cells.sort_by(|a, b| b.value.total_cmp(&a.value));

    let mut best = cells[0];
    for start in cells.iter().take(4) {
        let step_a = if start.ra + h <= dom { h } else { -h };
        let step_b = if start.rb + h <= dom { h } else { -h };
        let (p, v) = simplex_maximize(&objective, &[start.ra, start.rb], &[step_a, step_b], opts.iterations, opts.tolerance)
            .unwrap_or_else(|e: std::convert::Infallible| match e {});
        if v > best.value {
            best = Cell { ra: fold(p[0]), rb: fold(p[1]), value: v };
        }
    }

    let mut warnings = Vec::new();
    if best.ra >= dom - 1e-9 || best.rb >= dom - 1e-9 {
        warnings.push(ThresholdWarning::Boundary { ra: best.ra, rb: best.rb });
    }
    let mut samples = opts.samples;
    let mut value = best.value;
    let mut converged = false;
    for _ in 0..2 {
        let finer = averaged(best.ra, best.rb, 2 * samples);
        let change = (finer - value).abs();
        if change < PHASE_TOL {
            converged = true;
            break;
        }
        samples *= 2;
        value = finer;
        if samples == 4 * opts.samples {
            warnings.push(ThresholdWarning::PhaseAccuracy { change });
        }
    }
    Ok(ThresholdResult { value, argmax: (best.ra, best.rb), samples, converged, warnings })
}

/// Input threshold of the noise-free QND gate with gain `G`.
pub fn input_threshold_ideal(gain: f64, opts: &PhaseAverageOptions) -> Result<ThresholdResult, ThresholdError> {
    if !gain.is_finite() {
        return Err(ThresholdError::Domain(format!("gain {gain} is not finite")));
    }
    input_threshold(&GateModel::ideal_qnd(gain), opts)
}
