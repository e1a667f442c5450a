//! Displaced-Gaussian overlaps and Wigner-function matrix elements.

use std::f64::consts::PI;

use nalgebra::SymmetricEigen;

use crate::combo::{CovarianceMatrix, GaussianCombo, GaussianTerm};
use crate::dd::{dd, div, exp, Dd};
use crate::error::CoreError;

/// Largest accepted condition number of `V₁ + V₂`.
pub const MAX_CONDITION: f64 = 1e12;

/// Cholesky factor of a 4×4 SPD matrix in double-double arithmetic.
fn cholesky_dd(s: &CovarianceMatrix) -> Option<[[Dd; 4]; 4]> {
    let a = s.entries();
    let mut l = [[dd(0.0); 4]; 4];
    for j in 0..4 {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(f64::from(d) > 0.0) {
            return None;
        }
        let ljj = d.sqrt();
        l[j][j] = ljj;
        for i in (j + 1)..4 {
            let mut v = a[i][j];
            for k in 0..j {
                v -= l[i][k] * l[j][k];
            }
            l[i][j] = div(v, ljj);
        }
    }
    Some(l)
}

fn check_conditioning(s: &CovarianceMatrix) -> Result<(), CoreError> {
    let m = s.to_f64();
    let sym = (m + m.transpose()) * 0.5;
    let ev = SymmetricEigen::new(sym).eigenvalues;
    let lo = ev.min();
    let hi = ev.max();
    if !(lo > 0.0) {
        return Err(CoreError::Numeric(format!(
            "covariance sum is not positive definite (smallest eigenvalue {lo:e})"
        )));
    }
    let cond = hi / lo;
    if cond > MAX_CONDITION {
        return Err(CoreError::Numeric(format!(
            "covariance sum condition number {cond:e} exceeds {MAX_CONDITION:e}"
        )));
    }
    Ok(())
}

/// `w₁w₂ · exp(-½ΔᵀS⁻¹Δ) / √det S`, without the `4π²` normalisation.
fn overlap_kernel(t1: &GaussianTerm, t2: &GaussianTerm) -> Result<Dd, CoreError> {
    let s = t1.cov.add(&t2.cov);
    check_conditioning(&s)?;
    let l = cholesky_dd(&s).ok_or_else(|| {
        CoreError::Numeric("covariance sum is not positive definite".into())
    })?;
    let mut sqrt_det = dd(1.0);
    for (j, row) in l.iter().enumerate() {
        sqrt_det *= row[j];
    }
    let w = t1.weight * t2.weight;
    let delta: Vec<f64> = (0..4).map(|i| t1.mean[i] - t2.mean[i]).collect();
    if delta.iter().all(|d| *d == 0.0) {
        return Ok(div(w, sqrt_det));
    }
    // Forward substitution L y = Δ; then ΔᵀS⁻¹Δ = |y|².
    let mut y = [dd(0.0); 4];
    let mut q = dd(0.0);
    for i in 0..4 {
        let mut v = dd(delta[i]);
        for k in 0..i {
            v -= l[i][k] * y[k];
        }
        y[i] = div(v, l[i][i]);
        q += y[i] * y[i];
    }
    Ok(div(w * exp(q * -0.5), sqrt_det))
}

/// Overlap integral `∫ W₁ W₂ d⁴r` of two weighted Gaussians.
pub fn gaussian_overlap(t1: &GaussianTerm, t2: &GaussianTerm) -> Result<f64, CoreError> {
    Ok(f64::from(overlap_kernel(t1, t2)? / (4.0 * PI * PI)))
}

/// Per-pair contributions `(4π)² ∫ W_i W_j`, row-major over `(bra_ket, state)`.
pub fn pair_contributions(
    bra_ket_combo: &GaussianCombo,
    state_combo: &GaussianCombo,
) -> Result<Vec<Dd>, CoreError> {
    let mut out = Vec::with_capacity(bra_ket_combo.len() * state_combo.len());
    for a in bra_ket_combo.terms() {
        for b in state_combo.terms() {
            // (4π)² / (4π²) = 4 exactly.
            out.push(overlap_kernel(a, b)? * 4.0);
        }
    }
    Ok(out)
}

/// Matrix element `Tr[A ρ] = (4π)² ∫ W_A W_ρ d⁴r` in double-double precision.
pub fn matrix_element_dd(bra_ket_combo: &GaussianCombo, state_combo: &GaussianCombo) -> Result<Dd, CoreError> {
    let mut s = dd(0.0);
    for c in pair_contributions(bra_ket_combo, state_combo)? {
        s += c;
    }
    Ok(s)
}

pub fn matrix_element(bra_ket_combo: &GaussianCombo, state_combo: &GaussianCombo) -> Result<f64, CoreError> {
    matrix_element_dd(bra_ket_combo, state_combo).map(f64::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combo::{hom_projector_combo, input_state_combo, push_combo};
    use crate::convention::{bs_matrix, qnd_matrix};
    use nalgebra::Matrix4;

    #[test]
    fn vacuum_overlaps() {
        let v = GaussianTerm::vacuum();
        let o = gaussian_overlap(&v, &v).unwrap();
        assert!((o - 1.0 / (16.0 * PI * PI)).abs() < 1e-16);
        let d = GaussianTerm::coherent([2.0, 0.0, 0.0, 0.0]);
        let o = gaussian_overlap(&v, &d).unwrap();
        assert!((o - (-1.0f64).exp() / (16.0 * PI * PI)).abs() < 1e-16);
    }

    #[test]
    fn identical_terms() {
        let cov = CovarianceMatrix::from_f64(&(Matrix4::identity() * 3.0));
        let t = GaussianTerm::new(dd(0.7), [0.3, -1.0, 0.2, 0.0], cov);
        let expected = 0.49 / (4.0 * PI * PI * (6.0f64).powi(4).sqrt());
        assert!((gaussian_overlap(&t, &t).unwrap() - expected).abs() < 1e-16);
    }

    #[test]
    fn vacuum_projector_normalisation() {
        let v = GaussianCombo::single(GaussianTerm::vacuum());
        assert!((matrix_element(&v, &v).unwrap() - 1.0).abs() < 1e-15);
        let hom = hom_projector_combo(1e-3).unwrap();
        assert!(matrix_element(&hom, &v).unwrap().abs() < 1e-3);
    }

    #[test]
    fn projector_on_split_pair_and_itself() {
        let n = 1e-4;
        let hom = hom_projector_combo(n).unwrap();
        let pair = input_state_combo(1.0, 1.0, n).unwrap();
        let split = push_combo(&pair, &bs_matrix(0.5).unwrap(), &Matrix4::zeros());
        assert!((matrix_element(&hom, &split).unwrap() - 1.0).abs() < 10.0 * n);
        assert!((matrix_element(&hom, &hom).unwrap() - 1.0).abs() < 10.0 * n);
    }

    #[test]
    fn qnd_single_photons() {
        let g = 0.87;
        let hom = hom_projector_combo(1e-3).unwrap();
        let out = push_combo(&input_state_combo(1.0, 1.0, 1e-3).unwrap(), &qnd_matrix(g), &Matrix4::zeros());
        assert!((matrix_element(&hom, &out).unwrap() - 0.260).abs() < 1e-3);
    }

    #[test]
    fn singular_sum_is_rejected() {
        let z = GaussianTerm::new(dd(1.0), [0.0; 4], CovarianceMatrix::from_f64(&Matrix4::zeros()));
        assert!(matches!(gaussian_overlap(&z, &z), Err(CoreError::Numeric(_))));
        let mut m = Matrix4::identity();
        m[(0, 0)] = 1e-13;
        let thin = GaussianTerm::new(dd(1.0), [0.0; 4], CovarianceMatrix::from_f64(&m));
        assert!(gaussian_overlap(&thin, &thin).is_err());
    }
}
