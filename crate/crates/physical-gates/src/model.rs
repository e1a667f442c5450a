//! Gate models: a linear output map over raw modes plus their correlations.

use gaussian_core::{bs_matrix, is_physical, min_physical_eigenvalue, qnd_matrix, LinearQuadratureMap};
use nalgebra::{DMatrix, Matrix4};
use serde::{Deserialize, Serialize};

use crate::basis::{apply_squeezing, orthogonalize_noise_modes, ModeRole, NoiseModeBasis, SqueezingConvention};
use crate::constants::{
    atom_light_constants, atom_mech_constants, thermal_force_constants, AtomMechConstants, PulseConstants,
    ThermalForceConstants,
};
use crate::error::GateError;
use crate::params::{AtomLightParams, AtomMechParams, OptomechParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateKind {
    Ideal,
    Bs,
    AtomLight,
    Optomech,
    AtomMech,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GateConstants {
    None,
    AtomLight(PulseConstants),
    Optomech {
        pulse: PulseConstants,
        force: ThermalForceConstants,
    },
    AtomMech(AtomMechConstants),
}

/// Gains and transfer factors of the signal block.
///
/// For the pulse gates `gain_a` multiplies the pulse P quadrature in the
/// matter P output and `gain_b` the matter X quadrature in the pulse X
/// output; the hybrid gate has `gain_a = gain_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveGains {
    pub gain_a: f64,
    pub gain_b: f64,
    pub transfer_a: f64,
    pub transfer_b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateModel {
    pub kind: GateKind,
    output: DMatrix<f64>,
    basis: NoiseModeBasis,
    signal_a: [usize; 2],
    signal_b: [usize; 2],
    pub constants: GateConstants,
    pub gains: EffectiveGains,
}

const SIGNALS: [(&str, ModeRole); 4] = [
    ("X_a", ModeRole::Signal),
    ("P_a", ModeRole::Signal),
    ("X_b", ModeRole::Signal),
    ("P_b", ModeRole::Signal),
];

fn signal_only(kind: GateKind, map: &LinearQuadratureMap, gains: EffectiveGains) -> GateModel {
    let basis = orthogonalize_noise_modes(&SIGNALS, DMatrix::identity(4, 4)).expect("identity overlaps");
    GateModel {
        kind,
        output: DMatrix::from_fn(4, 4, |i, j| map.0[(i, j)]),
        basis,
        signal_a: [0, 1],
        signal_b: [2, 3],
        constants: GateConstants::None,
        gains,
    }
}

impl GateModel {
    /// Noise-free QND gate with gain `G`.
    pub fn ideal_qnd(gain: f64) -> Self {
        signal_only(
            GateKind::Ideal,
            &qnd_matrix(gain),
            EffectiveGains { gain_a: gain, gain_b: gain, transfer_a: 1.0, transfer_b: 1.0 },
        )
    }

    /// Lossless beam splitter with transmittance `t`.
    pub fn beam_splitter(t: f64) -> Result<Self, GateError> {
        let map = bs_matrix(t).map_err(|e| GateError::Domain(e.to_string()))?;
        let s = (1.0 - t).sqrt();
        Ok(signal_only(
            GateKind::Bs,
            &map,
            EffectiveGains { gain_a: s, gain_b: s, transfer_a: t.sqrt(), transfer_b: t.sqrt() },
        ))
    }

    /// Output rows `(X_a, P_a, X_b, P_b)` over the raw modes.
    pub fn output_matrix(&self) -> &DMatrix<f64> {
        &self.output
    }

    pub fn basis(&self) -> &NoiseModeBasis {
        &self.basis
    }

    /// Raw-mode indices of `(x, p)` for the two signal inputs.
    pub fn signal_slots(&self) -> ([usize; 2], [usize; 2]) {
        (self.signal_a, self.signal_b)
    }

    /// Output rows over the independent modes, `A L`.
    pub fn transfer(&self) -> DMatrix<f64> {
        &self.output * self.basis.factor()
    }

    fn signal_columns(&self) -> [usize; 4] {
        [self.signal_a[0], self.signal_a[1], self.signal_b[0], self.signal_b[1]]
    }

    /// Signal block: how input signal quadratures reach the outputs.
    pub fn signal_map(&self) -> LinearQuadratureMap {
        let t = self.transfer();
        let cols = self.signal_columns();
        LinearQuadratureMap(Matrix4::from_fn(|i, j| t[(i, cols[j])]))
    }

    /// Added noise `V_N` from every non-signal mode.
    pub fn noise_covariance(&self) -> Matrix4<f64> {
        let t = self.transfer();
        let cols = self.signal_columns();
        let mut v = Matrix4::zeros();
        for (k, var) in self.basis.variances().iter().enumerate() {
            if cols.contains(&k) {
                continue;
            }
            for i in 0..4 {
                for j in 0..4 {
                    v[(i, j)] += var * t[(i, k)] * t[(j, k)];
                }
            }
        }
        v
    }

    /// Output covariance for isotropic signal inputs of variances `va`, `vb`.
    pub fn output_covariance(&self, va: f64, vb: f64) -> Matrix4<f64> {
        let m = self.signal_map().0;
        let vin = Matrix4::from_diagonal(&nalgebra::Vector4::new(va, va, vb, vb));
        m * vin * m.transpose() + self.noise_covariance()
    }

    pub fn check_physical(&self) -> Result<(), GateError> {
        let v = self.output_covariance(1.0, 1.0);
        if is_physical(&v) {
            Ok(())
        } else {
            Err(GateError::Unphysical(min_physical_eigenvalue(&v)))
        }
    }

    fn finish(self) -> Result<Self, GateError> {
        self.check_physical()?;
        Ok(self)
    }
}

fn pulse_gate(
    kind: GateKind,
    g: f64,
    kappa_tau: f64,
    eta: f64,
    gamma: Option<f64>,
) -> Result<GateModel, GateError> {
    let t = kappa_tau;
    let c = atom_light_constants(t);
    let (o_k, o_f1, o_kf1) = c.mode_overlaps();
    let mut modes: Vec<(&str, ModeRole)> = vec![
        ("X_a", ModeRole::Signal),
        ("P_a", ModeRole::Signal),
        ("X_L0", ModeRole::Signal),
        ("P_L0", ModeRole::Signal),
        ("X_0k", ModeRole::Vacuum),
        ("P_0k", ModeRole::Vacuum),
        ("X_0f1", ModeRole::Vacuum),
        ("P_0f1", ModeRole::Vacuum),
        ("x_c0", ModeRole::Vacuum),
        ("p_c0", ModeRole::Vacuum),
        ("x_vac", ModeRole::Vacuum),
        ("p_vac", ModeRole::Vacuum),
    ];
    if gamma.is_some() {
        modes.extend([
            ("zeta_X", ModeRole::Thermal),
            ("zeta_P", ModeRole::Thermal),
            ("zeta_f2", ModeRole::Thermal),
        ]);
    }
    let n = modes.len();
    let force = thermal_force_constants(g, t);
    let mut gram = DMatrix::identity(n, n);
    for (i, j, v) in [(2, 4, o_k), (2, 6, o_f1), (4, 6, o_kf1), (3, 5, o_k), (3, 7, o_f1), (5, 7, o_kf1)] {
        gram[(i, j)] = v;
        gram[(j, i)] = v;
    }
    if gamma.is_some() {
        let v = force.overlap(t);
        gram[(12, 14)] = v;
        gram[(14, 12)] = v;
    }
    let basis = orthogonalize_noise_modes(&modes, gram)?;

    let d1 = -(-t).exp_m1();
    let gain_a = g * (2.0 * t).sqrt();
    let gain_b = gain_a * eta.sqrt() * (1.0 - d1 / t);
    let transfer = eta.sqrt() * (c.l - 1.0);
    let theta = g * d1;
    let cavity = (2.0 * eta).sqrt() * d1 / t.sqrt();
    let aux = eta.sqrt() * c.l * c.l1;

    let mut a = DMatrix::zeros(4, n);
    a[(0, 0)] = 1.0;
    a[(1, 1)] = 1.0;
    a[(1, 3)] = -gain_a;
    a[(1, 9)] = -theta;
    a[(1, 5)] = gain_a * c.k1 / t.sqrt();
    a[(2, 2)] = transfer;
    a[(2, 0)] = gain_b;
    a[(2, 10)] = (1.0 - eta).sqrt();
    a[(2, 8)] = cavity;
    a[(2, 6)] = aux;
    a[(3, 3)] = transfer;
    a[(3, 11)] = (1.0 - eta).sqrt();
    a[(3, 9)] = cavity;
    a[(3, 7)] = aux;
    let constants = match gamma {
        Some(gm) => {
            let s = (2.0 * gm * t).sqrt();
            a[(0, 12)] = s;
            a[(1, 13)] = s;
            a[(2, 14)] = eta.sqrt() * (2.0 * gm).sqrt() * force.m;
            GateConstants::Optomech { pulse: c, force }
        }
        None => GateConstants::AtomLight(c),
    };
    GateModel {
        kind,
        output: a,
        basis,
        signal_a: [0, 1],
        signal_b: [2, 3],
        constants,
        gains: EffectiveGains { gain_a, gain_b, transfer_a: 1.0, transfer_b: transfer },
    }
    .finish()
}

pub fn build_atom_light_gate(params: &AtomLightParams) -> Result<GateModel, GateError> {
    params.validate()?;
    pulse_gate(GateKind::AtomLight, params.g_over_kappa, params.kappa_tau, params.eta, None)
}

/// Mechanics in place of atoms, plus reheating noise. At zero reheating the
/// force modes carry no weight and the added noise equals the atom-light one.
pub fn build_optomech_gate(params: &OptomechParams) -> Result<GateModel, GateError> {
    params.validate()?;
    pulse_gate(
        GateKind::Optomech,
        params.g_over_kappa,
        params.kappa_tau,
        params.eta,
        Some(params.gamma_over_kappa),
    )
}

pub fn build_atom_mech_gate(params: &AtomMechParams) -> Result<GateModel, GateError> {
    build_atom_mech_gate_with(params, SqueezingConvention::default())
}

/// Post-feedforward symmetric gate between atoms (slot a) and mechanics (slot b).
pub fn build_atom_mech_gate_with(
    params: &AtomMechParams,
    convention: SqueezingConvention,
) -> Result<GateModel, GateError> {
    params.validate()?;
    let t = params.kappa_tau;
    let (ga, gm, eta, gamma) = (params.ga_over_kappa, params.gm_over_kappa, params.eta, params.gamma_over_kappa);
    let c = atom_mech_constants(ga, gm, t, eta);
    let modes = [
        ("X_A", ModeRole::Signal),
        ("P_A", ModeRole::Signal),
        ("X_M", ModeRole::Signal),
        ("P_M", ModeRole::Signal),
        ("X_in", ModeRole::MediatorX),
        ("X_in_f", ModeRole::MediatorX),
        ("P_in", ModeRole::MediatorP),
        ("X_vac", ModeRole::Vacuum),
        ("P_vac", ModeRole::Vacuum),
        ("zeta_X", ModeRole::Thermal),
        ("zeta_f", ModeRole::Thermal),
        ("zeta_P", ModeRole::Thermal),
        ("x_c0", ModeRole::Vacuum),
        ("p_c0", ModeRole::Vacuum),
        ("x'_c0", ModeRole::Vacuum),
        ("p'_c0", ModeRole::Vacuum),
    ];
    let mut gram = DMatrix::identity(16, 16);
    for (i, j, v) in [(4, 5, c.input_overlap()), (9, 10, c.force_overlap(t))] {
        gram[(i, j)] = v;
        gram[(j, i)] = v;
    }
    let basis = apply_squeezing(&orthogonalize_noise_modes(&modes, gram)?, params.squeezing_db, convention)?;

    let e = (-t).exp();
    let d1 = -(-t).exp_m1();
    let mut a = DMatrix::zeros(4, 16);
    a[(0, 0)] = 1.0;
    a[(0, 2)] = c.gain;
    a[(0, 4)] = -(2f64.sqrt()) * ga / c.k2;
    a[(0, 5)] = c.kf / c.k5 * (eta / t).sqrt();
    a[(0, 7)] = c.kf / c.k1 * ((1.0 - eta) / t).sqrt();
    a[(0, 10)] = gm * c.kf / c.k3 * (4.0 * gamma / t).sqrt();
    a[(0, 12)] = c.kf * (2.0 * eta / t).sqrt() * (1.0 - e * (2.0 * t + 1.0)) - ga * d1;
    a[(0, 14)] = c.kf * (2.0 / t).sqrt() * d1;
    a[(1, 1)] = 1.0;
    a[(2, 2)] = 1.0;
    a[(2, 9)] = (2.0 * gamma * t).sqrt();
    a[(3, 3)] = 1.0;
    a[(3, 1)] = -c.gain;
    a[(3, 15)] = -gm * d1;
    a[(3, 11)] = (2.0 * gamma * t).sqrt();
    a[(3, 6)] = -(2.0 * eta).sqrt() * gm / c.k6;
    a[(3, 13)] = -2.0 * eta.sqrt() * gm * (1.0 - e * (1.0 + t));
    a[(3, 8)] = -gm / c.k2 * (2.0 * (1.0 - eta)).sqrt();
    GateModel {
        kind: GateKind::AtomMech,
        output: a,
        basis,
        signal_a: [0, 1],
        signal_b: [2, 3],
        constants: GateConstants::AtomMech(c),
        gains: EffectiveGains { gain_a: c.gain, gain_b: c.gain, transfer_a: 1.0, transfer_b: 1.0 },
    }
    .finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn al(g: f64, t: f64, eta: f64) -> GateModel {
        build_atom_light_gate(&AtomLightParams { g_over_kappa: g, kappa_tau: t, eta }).unwrap()
    }

    #[test]
    fn atom_light_gains() {
        let m = al(0.06, 100.0, 0.9);
        assert!((m.gains.gain_a - 0.06 * 200f64.sqrt()).abs() < 1e-12);
        assert!((m.gains.gain_a - 0.84853).abs() < 1e-5);
        assert!((m.gains.gain_b - 0.7969).abs() < 1e-3);
        assert!(m.gains.gain_a != m.gains.gain_b);
        let s = m.signal_map().0;
        assert!((s[(1, 3)] + m.gains.gain_a).abs() < 0.05);
        assert!((s[(2, 0)] - m.gains.gain_b).abs() < 1e-12);
    }

    #[test]
    fn decoupled_lossless_long_pulse_is_identity() {
        let m = al(1e-12, 1e8, 1.0);
        let v = m.output_covariance(1.0, 1.0);
        assert!((v - Matrix4::identity()).abs().max() < 1e-6, "{v}");
        assert!((m.signal_map().0 - Matrix4::identity()).abs().max() < 1e-6);
    }

    #[test]
    fn zero_reheating_reduces_to_atom_light() {
        let a = al(0.06, 100.0, 0.9);
        let o = build_optomech_gate(&OptomechParams { g_over_kappa: 0.06, kappa_tau: 100.0, eta: 0.9, gamma_over_kappa: 0.0 })
            .unwrap();
        assert!((a.noise_covariance() - o.noise_covariance()).abs().max() < 1e-15);
        assert_eq!(a.signal_map(), o.signal_map());
    }

    #[test]
    fn hybrid_block_is_symmetric_qnd() {
        let p = AtomMechParams {
            ga_over_kappa: 0.07,
            gm_over_kappa: 0.07,
            kappa_tau: 90.0,
            eta: 0.9,
            gamma_over_kappa: 1e-4,
            squeezing_db: 7.0,
        };
        let m = build_atom_mech_gate(&p).unwrap();
        let s = m.signal_map().0;
        assert!((s[(0, 2)] - 0.818).abs() < 1e-3);
        assert_eq!(s[(0, 2)], -s[(3, 1)]);
        assert!((s - qnd_matrix(m.gains.gain_a).0).abs().max() < 1e-15);
        let nv = m.noise_covariance();
        assert_eq!(nv[(1, 1)], 0.0);
    }

    #[test]
    fn ideal_and_bs_models() {
        let q = GateModel::ideal_qnd(0.87);
        assert_eq!(q.noise_covariance(), Matrix4::zeros());
        assert_eq!(q.signal_map(), qnd_matrix(0.87));
        assert!(GateModel::beam_splitter(1.5).is_err());
    }
}
