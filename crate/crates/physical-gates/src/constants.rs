//! Temporal-mode constants of the three gates (κ = 1, `t` = κτ).
//!
//! Every constant has a closed form and a quadrature twin that integrates
//! the defining kernel directly; the twins exist for cross-checks.

use serde::Serialize;

/// Adaptive double-exponential quadrature on `[a, b]`, split into pieces of
/// length at most 8 so the `e^{-u}` boundary layers stay resolved.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let pieces = ((b - a) / 8.0).ceil().max(1.0) as usize;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + i as f64 * h;
            quadrature::double_exponential::integrate(&f, lo, lo + h, 1e-14).integral
        })
        .sum()
}

/// `1 − e^{−x}` without cancellation.
fn one_minus_exp(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// Flat-top pulse constants shared by the atom-light and optomechanical gates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseConstants {
    pub k1: f64,
    pub l: f64,
    pub l1: f64,
    pub kf: f64,
    pub kf1: f64,
    pub kff1: f64,
}

impl PulseConstants {
    /// Pairwise overlaps `(⟨0|κ⟩, ⟨0|f1⟩, ⟨κ|f1⟩)` of the normalized flat-top,
    /// cavity-decay and first auxiliary modes.
    pub fn mode_overlaps(&self) -> (f64, f64, f64) {
        (self.kf / self.k1, self.kf1 / self.l1, self.kff1 / (self.l1 * self.k1))
    }
}

pub fn atom_light_constants(kappa_tau: f64) -> PulseConstants {
    let t = kappa_tau;
    let d1 = one_minus_exp(t);
    let d2 = one_minus_exp(2.0 * t);
    let k1 = (0.5 * d2).sqrt();
    let l = (4.0 / t * (t - 2.0 * d1 + 0.5 * d2)).sqrt();
    let kf = d1 / t.sqrt();
    // f₁/L − u₀ = a·u₀ − b·decay, with a = 2/L − 1 written without cancellation.
    let a = 4.0 / t * (2.0 * d1 - 0.5 * d2) / (l * (2.0 + l));
    let b = 2.0 / (l * t.sqrt());
    let l1 = (a * a + b * b * k1 * k1 - 2.0 * a * b * kf).max(0.0).sqrt();
    let kf1 = a - b * kf;
    let kff1 = a * kf - b * k1 * k1;
    PulseConstants { k1, l, l1, kf, kf1, kff1 }
}

/// Same constants from their defining integrals.
pub fn atom_light_constants_quadrature(kappa_tau: f64) -> PulseConstants {
    let t = kappa_tau;
    let u0 = 1.0 / t.sqrt();
    let decay = |s: f64| (-(t - s)).exp();
    let f1 = |s: f64| 2.0 * one_minus_exp(t - s) / t.sqrt();
    let k1 = integrate(|s| decay(s).powi(2), 0.0, t).sqrt();
    let l = integrate(|s| f1(s).powi(2), 0.0, t).sqrt();
    let aux = |s: f64| f1(s) / l - u0;
    let l1 = integrate(|s| aux(s).powi(2), 0.0, t).sqrt();
    let kf = integrate(|s| decay(s) * u0, 0.0, t);
    let kf1 = integrate(|s| aux(s) * u0, 0.0, t);
    let kff1 = integrate(|s| decay(s) * aux(s), 0.0, t);
    PulseConstants { k1, l, l1, kf, kf1, kff1 }
}

/// Thermal-force mode of the optomechanical gate: norm `M` and integral `M₁`
/// of `f₃(u) = √(2/t) g (u − 1 + e^{−u})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalForceConstants {
    pub m: f64,
    pub m1: f64,
}

impl ThermalForceConstants {
    /// `⟨ζ_f2 ζ^X⟩ = M₁ / (√t M)`.
    pub fn overlap(&self, kappa_tau: f64) -> f64 {
        self.m1 / (kappa_tau.sqrt() * self.m)
    }
}

pub fn thermal_force_constants(g: f64, kappa_tau: f64) -> ThermalForceConstants {
    let t = kappa_tau;
    let e = (-t).exp();
    let j = ((t - 1.0).powi(3) + 1.0) / 3.0 - 2.0 * t * e + 0.5 * one_minus_exp(2.0 * t);
    let k4 = 0.5 * (t * t - 2.0 * t + 2.0 - 2.0 * e);
    ThermalForceConstants {
        m: (2.0 * g * g / t * j).sqrt(),
        m1: 2f64.sqrt() * g * k4 / t.sqrt(),
    }
}

pub fn thermal_force_constants_quadrature(g: f64, kappa_tau: f64) -> ThermalForceConstants {
    let t = kappa_tau;
    let f3 = |u: f64| (2.0 / t).sqrt() * g * (u - 1.0 + (-u).exp());
    ThermalForceConstants {
        m: integrate(|u| f3(u).powi(2), 0.0, t).sqrt(),
        m1: integrate(f3, 0.0, t),
    }
}

/// Constants of the hybrid gate. `k1..k6` normalize the temporal modes,
/// `k4` and `k7` enter their overlaps, `kf` is the feedforward gain and
/// `gain` the symmetric QND gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomMechConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    pub k6: f64,
    pub k7: f64,
    pub kf: f64,
    pub gain: f64,
}

impl AtomMechConstants {
    /// `⟨X^in X^in_f⟩`.
    pub fn input_overlap(&self) -> f64 {
        self.k2 * self.k5 * self.k7
    }

    /// `⟨ζ_f ζ^X⟩`.
    pub fn force_overlap(&self, kappa_tau: f64) -> f64 {
        self.k3 * self.k4 / kappa_tau.sqrt()
    }
}

/// `𝔊 = 2√η g_A g_M (e^{−t}(t+2) + t − 2)`.
pub fn atom_mech_gain(ga: f64, gm: f64, kappa_tau: f64, eta: f64) -> f64 {
    let t = kappa_tau;
    2.0 * eta.sqrt() * ga * gm * ((-t).exp() * (t + 2.0) + t - 2.0)
}

pub fn atom_mech_constants(ga: f64, gm: f64, kappa_tau: f64, eta: f64) -> AtomMechConstants {
    let t = kappa_tau;
    let e = (-t).exp();
    let e2 = e * e;
    AtomMechConstants {
        k1: (1.0 / (t - 2.0 + 4.0 * e - 2.0 * e2)).sqrt(),
        k2: (2.0 / (4.0 * e + 2.0 * t - 3.0 - e2)).sqrt(),
        k3: (6.0 / (3.0 + 2.0 * t * (3.0 + t * (t - 3.0)) - 3.0 * e2 - 12.0 * e * t)).sqrt(),
        k4: 0.5 * (t * t - 2.0 * t + 2.0 - 2.0 * e),
        k5: (1.0 / ((t - 4.0) + 8.0 * e * (1.0 + t) - 4.0 * e2 * (1.0 + 2.0 * t * (1.0 + t)))).sqrt(),
        k6: (2.0 / ((2.0 * t - 7.0) + 4.0 * e * (2.0 * t + 3.0) - e2 * (5.0 + 4.0 * t * (2.0 + t)))).sqrt(),
        k7: t - 4.0 + e * (5.0 + 4.0 * t) - e2 * (1.0 + 2.0 * t),
        kf: ga * (2.0 * eta * t).sqrt() * (e * (t + 2.0) + t - 2.0) / (t - 1.0 + e),
        gain: atom_mech_gain(ga, gm, kappa_tau, eta),
    }
}

/// Mode constants from the kernels on `u ∈ [0, t]`; `kf` and `gain` are copied.
pub fn atom_mech_constants_quadrature(ga: f64, gm: f64, kappa_tau: f64, eta: f64) -> AtomMechConstants {
    let t = kappa_tau;
    let inv_norm = |k: &dyn Fn(f64) -> f64| 1.0 / integrate(|u| k(u).powi(2), 0.0, t).sqrt();
    let vac = |u: f64| 1.0 - 2.0 * (-u).exp();
    let rise = |u: f64| one_minus_exp(u);
    let force = |u: f64| u - 1.0 + (-u).exp();
    let fed = |u: f64| 1.0 - 4.0 * u * (-u).exp();
    let p_in = |u: f64| 1.0 - (-u).exp() * (2.0 * u + 1.0);
    let closed = atom_mech_constants(ga, gm, kappa_tau, eta);
    AtomMechConstants {
        k1: inv_norm(&vac),
        k2: inv_norm(&rise),
        k3: inv_norm(&force),
        k4: integrate(force, 0.0, t),
        k5: inv_norm(&fed),
        k6: inv_norm(&p_in),
        k7: integrate(|u| rise(u) * fed(u), 0.0, t),
        ..closed
    }
}
