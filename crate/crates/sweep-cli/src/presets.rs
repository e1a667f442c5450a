//! Figure-reproduction presets.
//!
//! A figure with several curves of different fixed parameters is a preset
//! with several series; each series label lands in the `param` column.

use physical_gates::GateKind;

use crate::config::{SweepAxis, SweepConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub series: Vec<SweepConfig>,
}

pub const PRESET_NAMES: [&str; 9] = [
    "methods-ideal",
    "fig2a",
    "fig2b",
    "fig3a",
    "fig3b",
    "app-atomlight",
    "app-mechlight",
    "app-atommech-coupling",
    "app-atommech-squeezing",
];

fn atom_light() -> SweepConfig {
    SweepConfig::new(GateKind::AtomLight).set("kappa_tau", 100.0)
}

fn optomech() -> SweepConfig {
    SweepConfig::new(GateKind::Optomech).set("kappa_tau", 100.0)
}

fn atom_mech() -> SweepConfig {
    SweepConfig::new(GateKind::AtomMech).set("gamma_over_kappa", 1e-4)
}

fn labelled(base: &SweepConfig, name: &str, values: &[f64]) -> Vec<SweepConfig> {
    values.iter().map(|v| base.clone().set(name, *v).with_label(&format!("{name}={v}"))).collect()
}

pub fn preset(name: &str) -> Option<Preset> {
    let coupling = SweepAxis::linear("g_over_kappa", 0.005, 0.2, 80);
    let (summary, series) = match name {
        "methods-ideal" => (
            "ideal QND gate against gain with the mixture input",
            vec![SweepConfig::new(GateKind::Ideal)
                .with_sweep(SweepAxis::linear("gain", 0.0, 3.0, 80))
                .with_p(&[1.0, 0.85, 0.7, 0.48, 0.4])
                .with_thresholds(true, true)],
        ),
        "fig2a" => (
            "atom-light gate against coupling",
            vec![atom_light()
                .set("eta", 0.9)
                .with_sweep(coupling)
                .with_p(&[1.0, 0.78, 0.55])
                .with_thresholds(true, true)],
        ),
        "fig2b" => (
            "optomechanical gate against coupling at two reheating rates",
            labelled(
                &optomech().set("eta", 0.9).with_sweep(coupling).with_p(&[1.0, 0.78, 0.55]).with_thresholds(true, true),
                "gamma_over_kappa",
                &[1e-4, 1e-3],
            ),
        ),
        "fig3a" => (
            "atom-mechanical gate against coupling",
            vec![atom_mech()
                .set("eta", 0.9)
                .set("squeezing_db", 7.0)
                .set("kappa_tau", 90.0)
                .with_sweep(SweepAxis::linear("g_over_kappa", 0.01, 0.2, 80))
                .with_p(&[1.0, 0.93, 0.67, 0.63])
                .with_thresholds(true, true)],
        ),
        "fig3b" => (
            "atom-mechanical gate against pulse duration at three couplings",
            labelled(
                &atom_mech()
                    .set("eta", 0.9)
                    .set("squeezing_db", 7.0)
                    .with_sweep(SweepAxis::linear("kappa_tau", 10.0, 250.0, 80))
                    .with_thresholds(true, true),
                "g_over_kappa",
                &[0.045, 0.07, 0.15],
            ),
        ),
        "app-atomlight" => (
            "atom-light gate with single quanta at three efficiencies",
            labelled(
                &atom_light().with_sweep(SweepAxis::linear("g_over_kappa", 0.002, 0.2, 80)).with_thresholds(true, true),
                "eta",
                &[1.0, 0.9, 0.1],
            ),
        ),
        "app-mechlight" => {
            let base = optomech().with_sweep(SweepAxis::linear("g_over_kappa", 0.002, 0.2, 80)).with_thresholds(true, true);
            let mut series = Vec::new();
            for gamma in [1e-2, 1e-3] {
                for eta in [1.0, 0.1] {
                    series.push(
                        base.clone()
                            .set("gamma_over_kappa", gamma)
                            .set("eta", eta)
                            .with_label(&format!("gamma_over_kappa={gamma},eta={eta}")),
                    );
                }
            }
            ("optomechanical gate with single quanta at two reheating rates and efficiencies", series)
        }
        "app-atommech-coupling" => (
            "atom-mechanical gate with single quanta against coupling at three efficiencies",
            labelled(
                &atom_mech()
                    .set("kappa_tau", 90.0)
                    .set("squeezing_db", 7.0)
                    .with_sweep(SweepAxis::linear("g_over_kappa", 0.01, 0.2, 80))
                    .with_thresholds(true, true),
                "eta",
                &[1.0, 0.8, 0.1],
            ),
        ),
        "app-atommech-squeezing" => (
            "atom-mechanical gate with single quanta against squeezing at three efficiencies",
            labelled(
                &atom_mech()
                    .set("kappa_tau", 90.0)
                    .set("g_over_kappa", 0.07)
                    .with_sweep(SweepAxis::linear("squeezing_db", 0.0, 20.0, 81))
                    .with_thresholds(true, true),
                "eta",
                &[1.0, 0.8, 0.1],
            ),
        ),
        _ => return None,
    };
    let name = PRESET_NAMES.iter().find(|n| **n == name).expect("listed");
    Some(Preset { name, summary, series })
}

pub fn all_presets() -> Vec<Preset> {
    PRESET_NAMES.iter().map(|n| preset(n).expect("listed")).collect()
}
