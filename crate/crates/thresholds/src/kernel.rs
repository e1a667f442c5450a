//! HOM element of coherent-input gate outputs as a precomputed Gaussian sum.
//!
//! For vacuum-covariance signal inputs with means `m`, the output is one
//! Gaussian with mean `S m` and covariance `V = S Sᵀ + V_N`. Against the HOM
//! projector combo (zero means, covariances `V'_k`) the element is
//! `Σ_k c_k exp(−½ mᵀ Q_k m)` with `Q_k = Sᵀ (V'_k + V)⁻¹ S`. The `n/2` and
//! `n` projector combos enter with Richardson weights 2 and −1.

use std::f64::consts::PI;

use gaussian_core::{hom_projector_combo, min_physical_eigenvalue, pair_contributions, CovarianceMatrix, Dd, GaussianCombo, GaussianTerm};
use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use physical_gates::GateModel;

use crate::error::ThresholdError;

/// A quadratic form `½ mᵀQm` split by mode for the phase loops.
#[derive(Debug, Clone, Copy)]
struct Split {
    aa: Matrix2<f64>,
    ab: Matrix2<f64>,
    bb: Matrix2<f64>,
}

impl Split {
    fn new(q: &Matrix4<f64>) -> Self {
        let q = (q + q.transpose()) * 0.5;
        Self {
            aa: q.fixed_view::<2, 2>(0, 0).into(),
            ab: q.fixed_view::<2, 2>(0, 2).into(),
            bb: q.fixed_view::<2, 2>(2, 2).into(),
        }
    }
}

/// The projector terms share one reference exponent: the vacuum-vacuum term,
/// whose covariance is `𝕀` at every occupation. With `δ_k` the (small)
/// exponent differences, the element is
/// `e^{−x_ref} [C₀ + Σ_k c_k expm1(−δ_k)]`, `C₀ = Σ_k c_k`, which keeps the
/// `1/n²` weights from cancelling in floating point.
#[derive(Debug, Clone)]
pub struct CoherentKernel {
    reference: Matrix4<f64>,
    c0: f64,
    coefs: Vec<f64>,
    deltas: Vec<Matrix4<f64>>,
}

impl CoherentKernel {
    pub fn new(model: &GateModel, n: f64) -> Result<Self, ThresholdError> {
        let s = model.signal_map().0;
        let v = s * s.transpose() + model.noise_covariance();
        let floor = min_physical_eigenvalue(&v);
        if floor < -1e-9 {
            return Err(ThresholdError::Unphysical(floor));
        }
        let state = GaussianCombo::single(GaussianTerm::new(Dd::from(1.0), [0.0; 4], CovarianceMatrix::from_f64(&v)));
        let a = Matrix4::identity() + v;
        let a_inv = a
            .try_inverse()
            .ok_or_else(|| ThresholdError::Domain("output covariance plus vacuum is singular".into()))?;
        let reference = s.transpose() * a_inv * s;
        let mut c0 = Dd::from(0.0);
        let mut coefs = Vec::new();
        let mut deltas = Vec::new();
        for (richardson, occupation) in [(2.0, n / 2.0), (-1.0, n)] {
            let projector = hom_projector_combo(occupation)?;
            // 4 w_k / √det(V'_k + V), in double-double
            let weights = pair_contributions(&projector, &state)?;
            for (t, w) in projector.terms().iter().zip(weights) {
                debug_assert!(t.mean.iter().all(|m| *m == 0.0));
                let c = w * richardson;
                c0 += c;
                let e = Matrix4::from_fn(|i, j| f64::from(t.cov.get(i, j) - if i == j { 1.0 } else { 0.0 }));
                if e.iter().all(|x| *x == 0.0) {
                    continue;
                }
                // (A + E)⁻¹ − A⁻¹ = −(A + E)⁻¹ E A⁻¹
                let ae_inv = (a + e)
                    .try_inverse()
                    .ok_or_else(|| ThresholdError::Domain("projector plus output covariance is singular".into()))?;
                let dq = -(s.transpose() * ae_inv * e * a_inv * s);
                coefs.push(f64::from(c));
                deltas.push((dq + dq.transpose()) * 0.5);
            }
        }
        Ok(Self { reference, c0: f64::from(c0), coefs, deltas })
    }

    /// Element for coherent input means `(2Re α, 2Im α, 2Re β, 2Im β)`.
    pub fn element(&self, means: &[f64; 4]) -> f64 {
        let m = Vector4::from_column_slice(means);
        let x_ref = 0.5 * m.dot(&(self.reference * m));
        let corr: f64 = self
            .coefs
            .iter()
            .zip(&self.deltas)
            .map(|(c, d)| c * (-0.5 * m.dot(&(d * m))).exp_m1())
            .sum();
        (-x_ref).exp() * (self.c0 + corr)
    }

    /// Periodic-trapezoid average over both input phases at amplitudes
    /// `|α| = ra`, `|β| = rb`, with the phase grid shifted by `offset`.
    pub fn phase_average(&self, ra: f64, rb: f64, samples: usize, offset: f64) -> f64 {
        let h = 2.0 * PI / samples as f64;
        let dirs: Vec<Vector2<f64>> = (0..samples)
            .map(|i| {
                let phi = offset + i as f64 * h;
                Vector2::new(phi.cos(), phi.sin())
            })
            .collect();
        let forms: Vec<Split> = std::iter::once(&self.reference).chain(&self.deltas).map(Split::new).collect();
        let k = forms.len();
        // ½ mᵀQm with m = 2(ra·da, rb·db) is ea + wa·db + eb
        let mut eb = vec![0.0; samples * k];
        for (j, d) in dirs.iter().enumerate() {
            for (f, q) in forms.iter().enumerate() {
                eb[j * k + f] = 2.0 * rb * rb * d.dot(&(q.bb * d));
            }
        }
        let mut ea = vec![0.0; k];
        let mut wa = vec![Vector2::zeros(); k];
        let mut total = 0.0;
        for da in &dirs {
            for (f, q) in forms.iter().enumerate() {
                ea[f] = 2.0 * ra * ra * da.dot(&(q.aa * da));
                wa[f] = q.ab.transpose() * da * (4.0 * ra * rb);
            }
            for (j, db) in dirs.iter().enumerate() {
                let row = &eb[j * k..(j + 1) * k];
                let x_ref = ea[0] + wa[0].dot(db) + row[0];
                let mut bracket = self.c0;
                for f in 1..k {
                    bracket += self.coefs[f - 1] * (-(ea[f] + wa[f].dot(db) + row[f])).exp_m1();
                }
                total += (-x_ref).exp() * bracket;
            }
        }
        total / (samples * samples) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hom_metrics::coherent_output_element;

    #[test]
    fn matches_gaussian_engine() {
        let model = GateModel::ideal_qnd(0.87);
        let k = CoherentKernel::new(&model, 1e-3).unwrap();
        for m in [[0.0; 4], [2.0, 0.0, 0.0, 2.0], [1.0, -0.5, 0.3, 2.2], [3.0, 1.0, -2.0, 0.5]] {
            let a = k.element(&m);
            let b = coherent_output_element(&model, &m).unwrap();
            assert!((a - b).abs() < 1e-8, "{m:?}: {a} vs {b}");
        }
    }

    #[test]
    fn identity_gate_average_is_one_mode_closed_form() {
        let k = CoherentKernel::new(&GateModel::ideal_qnd(0.0), 1e-3).unwrap();
        for (a, b) in [(1.0f64, 0.0f64), (2f64.sqrt(), 0.0), (1.0, 1.3)] {
            let expect = 0.25 * (-a * a - b * b).exp() * (a.powi(4) + b.powi(4));
            let got = k.phase_average(a, b, 64, 0.0);
            // what is left is the O(n²) remainder of the extrapolation
            assert!((got - expect).abs() < 1e-6, "{got} vs {expect}");
        }
    }
}
