//! Named gate parameters and model construction from a flat parameter map.

use std::collections::BTreeMap;

use physical_gates::{
    build_atom_light_gate, build_atom_mech_gate, build_optomech_gate, AtomLightParams, AtomMechParams, GateError,
    GateKind, GateModel, OptomechParams,
};

pub type ParamMap = BTreeMap<String, f64>;

pub fn kind_name(kind: GateKind) -> &'static str {
    match kind {
        GateKind::Ideal => "ideal",
        GateKind::Bs => "bs",
        GateKind::AtomLight => "atom-light",
        GateKind::Optomech => "optomech",
        GateKind::AtomMech => "atom-mech",
    }
}

pub fn parse_kind(s: &str) -> Option<GateKind> {
    [GateKind::Ideal, GateKind::Bs, GateKind::AtomLight, GateKind::Optomech, GateKind::AtomMech]
        .into_iter()
        .find(|k| kind_name(*k) == s)
}

/// Parameter names accepted for a gate kind.
///
/// For the atom-mechanical gate `g_over_kappa` is the shared coupling;
/// `ga_over_kappa` and `gm_over_kappa`, when given, replace it for one side.
pub fn parameter_names(kind: GateKind) -> &'static [&'static str] {
    match kind {
        GateKind::Ideal => &["gain"],
        GateKind::Bs => &["transmissivity"],
        GateKind::AtomLight => &["g_over_kappa", "kappa_tau", "eta"],
        GateKind::Optomech => &["g_over_kappa", "kappa_tau", "eta", "gamma_over_kappa"],
        GateKind::AtomMech => &[
            "g_over_kappa",
            "ga_over_kappa",
            "gm_over_kappa",
            "kappa_tau",
            "eta",
            "gamma_over_kappa",
            "squeezing_db",
        ],
    }
}

pub fn default_parameters(kind: GateKind) -> ParamMap {
    let pairs: &[(&str, f64)] = match kind {
        GateKind::Ideal => &[("gain", (11.0 - 105f64.sqrt()).sqrt())],
        GateKind::Bs => &[("transmissivity", 0.5)],
        GateKind::AtomLight => &[("g_over_kappa", 0.06), ("kappa_tau", 100.0), ("eta", 0.9)],
        GateKind::Optomech => {
            &[("g_over_kappa", 0.06), ("kappa_tau", 100.0), ("eta", 0.9), ("gamma_over_kappa", 1e-4)]
        }
        GateKind::AtomMech => &[
            ("g_over_kappa", 0.07),
            ("kappa_tau", 90.0),
            ("eta", 0.9),
            ("gamma_over_kappa", 1e-4),
            ("squeezing_db", 7.0),
        ],
    };
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn is_parameter(kind: GateKind, name: &str) -> bool {
    parameter_names(kind).contains(&name)
}

/// Defaults overlaid with `overrides`.
pub fn resolve(kind: GateKind, overrides: &ParamMap) -> ParamMap {
    let mut p = default_parameters(kind);
    p.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));
    p
}

fn get(p: &ParamMap, name: &str) -> f64 {
    p[name]
}

/// Builds the gate from a fully resolved parameter map.
pub fn build_gate(kind: GateKind, p: &ParamMap) -> Result<GateModel, GateError> {
    match kind {
        GateKind::Ideal => {
            let g = get(p, "gain");
            if !g.is_finite() {
                return Err(GateError::Domain(format!("gain = {g} is not finite")));
            }
            Ok(GateModel::ideal_qnd(g))
        }
        GateKind::Bs => GateModel::beam_splitter(get(p, "transmissivity")),
        GateKind::AtomLight => build_atom_light_gate(&AtomLightParams {
            g_over_kappa: get(p, "g_over_kappa"),
            kappa_tau: get(p, "kappa_tau"),
            eta: get(p, "eta"),
        }),
        GateKind::Optomech => build_optomech_gate(&OptomechParams {
            g_over_kappa: get(p, "g_over_kappa"),
            kappa_tau: get(p, "kappa_tau"),
            eta: get(p, "eta"),
            gamma_over_kappa: get(p, "gamma_over_kappa"),
        }),
        GateKind::AtomMech => {
            let g = get(p, "g_over_kappa");
            build_atom_mech_gate(&AtomMechParams {
                ga_over_kappa: p.get("ga_over_kappa").copied().unwrap_or(g),
                gm_over_kappa: p.get("gm_over_kappa").copied().unwrap_or(g),
                kappa_tau: get(p, "kappa_tau"),
                eta: get(p, "eta"),
                gamma_over_kappa: get(p, "gamma_over_kappa"),
                squeezing_db: get(p, "squeezing_db"),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_for_every_kind() {
        for kind in [GateKind::Ideal, GateKind::Bs, GateKind::AtomLight, GateKind::Optomech, GateKind::AtomMech] {
            assert_eq!(parse_kind(kind_name(kind)), Some(kind));
            let p = default_parameters(kind);
            assert!(p.keys().all(|k| is_parameter(kind, k)));
            build_gate(kind, &p).unwrap();
        }
    }

    #[test]
    fn split_couplings_override_the_shared_one() {
        let mut o = ParamMap::new();
        o.insert("ga_over_kappa".into(), 0.05);
        let m = build_gate(GateKind::AtomMech, &resolve(GateKind::AtomMech, &o)).unwrap();
        let shared = build_gate(GateKind::AtomMech, &default_parameters(GateKind::AtomMech)).unwrap();
        assert!(m.gains.gain_a != shared.gains.gain_a);
    }
}
