//! Closed-form HOM elements of the ideal gates.

use nalgebra::Complex;

use crate::error::FockError;

/// `|⟨HOM|U_G|1,1⟩|² = 16G²(G²−8)²/(4+G²)⁵`.
pub fn closed_form_qnd_11(gain: f64) -> f64 {
    let g2 = gain * gain;
    16.0 * g2 * (g2 - 8.0).powi(2) / (4.0 + g2).powi(5)
}

/// `|⟨HOM|U_G|0,0⟩|² = 4G⁴/(4+G²)³`.
pub fn closed_form_qnd_00(gain: f64) -> f64 {
    let g2 = gain * gain;
    4.0 * g2 * g2 / (4.0 + g2).powi(3)
}

/// Beam splitter with transmittance `t` on `|1,1⟩`: `4t(1−t)`.
pub fn closed_form_bs_11(t: f64) -> f64 {
    4.0 * t * (1.0 - t)
}

/// Gain maximizing `closed_form_qnd_11`: `√(11 − √105)`.
pub fn optimal_qnd_gain() -> f64 {
    (11.0 - 105f64.sqrt()).sqrt()
}

/// Ideal QND element for `ρ(p_a) ⊗ ρ(p_b)`, `ρ(p) = p|1⟩⟨1| + (1−p)|0⟩⟨0|`.
///
/// The mixed `|1,0⟩`, `|0,1⟩` terms carry odd parity and drop out.
pub fn hom_element_mixture_ideal(gain: f64, p_a: f64, p_b: f64) -> Result<f64, FockError> {
    for p in [p_a, p_b] {
        if !(0.0..=1.0).contains(&p) {
            return Err(FockError::Domain(format!("single-quantum fraction {p} outside [0, 1]")));
        }
    }
    Ok(p_a * p_b * closed_form_qnd_11(gain) + (1.0 - p_a) * (1.0 - p_b) * closed_form_qnd_00(gain))
}

/// `(1/4) e^{−|α|²−|β|²} |α² − β²|²` for coherent inputs after a balanced splitter.
pub fn coherent_hom_element(alpha: Complex<f64>, beta: Complex<f64>) -> f64 {
    0.25 * (-alpha.norm_sqr() - beta.norm_sqr()).exp() * (alpha * alpha - beta * beta).norm_sqr()
}
