//! HOM element `⟨HOM|ρ_out|HOM⟩` through the thermal/vacuum photon approximation.
//!
//! Each single photon is written as `((n+1)/n) W_thermal(n) − (1/n) W_vac`, so
//! both the input state and the projector become signed Gaussian combos and
//! the element is a sum of Gaussian overlaps with an `O(n)` bias. The bias is
//! removed by Richardson extrapolation `2M(n/2) − M(n)`.

use gaussian_core::{
    hom_projector_combo, input_state_combo, matrix_element, min_physical_eigenvalue, pair_contributions,
    push_combo, CovarianceMatrix, Dd, GaussianCombo, GaussianTerm, QuadratureVector,
};
use nalgebra::Matrix4;
use physical_gates::GateModel;

use crate::error::HomError;

pub const DEFAULT_OCCUPATION: f64 = 1e-3;

/// Mixture input `(p|1⟩⟨1| + (1−p)|0⟩⟨0|)` on each signal slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputSpec {
    pub p_a: f64,
    pub p_b: f64,
    /// Occupation of the thermal member of the photon approximation.
    pub n: f64,
    /// Report `2M(n/2) − M(n)` instead of `M(n)`.
    pub extrapolate: bool,
}

impl InputSpec {
    pub fn new(p_a: f64, p_b: f64) -> Self {
        Self { p_a, p_b, n: DEFAULT_OCCUPATION, extrapolate: true }
    }

    pub fn symmetric(p: f64) -> Self {
        Self::new(p, p)
    }

    pub fn with_occupation(self, n: f64) -> Self {
        Self { n, ..self }
    }

    pub fn raw(self) -> Self {
        Self { extrapolate: false, ..self }
    }

    pub fn validate(&self) -> Result<(), HomError> {
        for (name, p) in [("p_a", self.p_a), ("p_b", self.p_b)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(HomError::Domain(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// One overlap of the sum: projector term `(k, l)` against state term `(m, d)`.
/// Index 0 is the thermal member of a photon combo, 1 the vacuum member.
/// Contributions are of order `n⁻⁴` and cancel, hence double-double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermContribution {
    pub projector: (usize, usize),
    pub state: (usize, usize),
    pub value: Dd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomResult {
    pub value: f64,
    /// Unextrapolated element at `n`.
    pub raw_value: f64,
    pub n: f64,
    /// `|M(n/2) − M(n)|`, zero when extrapolation is off.
    pub error_estimate: f64,
    /// Contributions at `n`, summing to `raw_value`.
    pub breakdown: Vec<TermContribution>,
}

fn mixture_len(p: f64) -> usize {
    if p == 0.0 {
        1
    } else {
        2
    }
}

fn check_terms(combo: &GaussianCombo) -> Result<(), HomError> {
    for (i, t) in combo.terms().iter().enumerate() {
        let v = t.cov.to_f64();
        let min_eigenvalue = min_physical_eigenvalue(&v);
        if min_eigenvalue < -1e-9 {
            return Err(HomError::Unphysical { term: i, min_eigenvalue });
        }
    }
    Ok(())
}

fn evaluate_at(model: &GateModel, input: &InputSpec, n: f64) -> Result<(f64, Vec<TermContribution>), HomError> {
    let projector = hom_projector_combo(n)?;
    let state = push_combo(
        &input_state_combo(input.p_a, input.p_b, n)?,
        &model.signal_map(),
        &model.noise_covariance(),
    );
    check_terms(&state)?;
    let pairs = pair_contributions(&projector, &state)?;
    let nb = mixture_len(input.p_b);
    let mut sum = Dd::from(0.0);
    let mut breakdown = Vec::with_capacity(pairs.len());
    for (idx, c) in pairs.iter().enumerate() {
        sum += *c;
        let (pi, si) = (idx / state.len(), idx % state.len());
        breakdown.push(TermContribution {
            projector: (pi / 2, pi % 2),
            state: (si / nb, si % nb),
            value: *c,
        });
    }
    Ok((f64::from(sum), breakdown))
}

/// HOM element of the gate output for mixture inputs on the two signal slots.
pub fn hom_element_for_gate(model: &GateModel, input: &InputSpec) -> Result<HomResult, HomError> {
    input.validate()?;
    let (raw, breakdown) = evaluate_at(model, input, input.n)?;
    if !input.extrapolate {
        return Ok(HomResult { value: raw, raw_value: raw, n: input.n, error_estimate: 0.0, breakdown });
    }
    let (half, _) = evaluate_at(model, input, input.n / 2.0)?;
    Ok(HomResult {
        value: 2.0 * half - raw,
        raw_value: raw,
        n: input.n,
        error_estimate: (half - raw).abs(),
        breakdown,
    })
}

/// Ideal QND gate through the Gaussian engine, extrapolated from base occupation `n`.
pub fn hom_element_ideal_via_wigner(gain: f64, p_a: f64, p_b: f64, n: f64) -> Result<f64, HomError> {
    if !gain.is_finite() {
        return Err(HomError::Domain(format!("gain {gain} is not finite")));
    }
    let input = InputSpec::new(p_a, p_b).with_occupation(n);
    Ok(hom_element_for_gate(&GateModel::ideal_qnd(gain), &input)?.value)
}

/// HOM element for coherent signal inputs with quadrature means `means`.
///
/// Means are twice the coherent amplitudes: `(2Re α, 2Im α, 2Re β, 2Im β)`.
pub fn coherent_output_element(model: &GateModel, means: &QuadratureVector) -> Result<f64, HomError> {
    coherent_output_element_at(model, means, DEFAULT_OCCUPATION)
}

pub fn coherent_output_element_at(model: &GateModel, means: &QuadratureVector, n: f64) -> Result<f64, HomError> {
    if means.iter().any(|m| !m.is_finite()) {
        return Err(HomError::Domain("coherent means must be finite".into()));
    }
    let map = model.signal_map();
    let v = map.0 * map.0.transpose() + model.noise_covariance();
    coherent_gaussian_element(&map.apply(means), &v, n)
}

/// Extrapolated HOM element of a Gaussian state with the given mean and covariance.
pub fn coherent_gaussian_element(mean: &QuadratureVector, cov: &Matrix4<f64>, n: f64) -> Result<f64, HomError> {
    let state = GaussianCombo::single(GaussianTerm::new(1.0.into(), *mean, CovarianceMatrix::from_f64(cov)));
    check_terms(&state)?;
    let at = |n: f64| -> Result<f64, HomError> { Ok(matrix_element(&hom_projector_combo(n)?, &state)?) };
    Ok(2.0 * at(n / 2.0)? - at(n)?)
}
