//! Sweep configuration and its flat key/value text form.

use std::path::PathBuf;

use physical_gates::GateKind;
use serde::{Deserialize, Serialize};
use thresholds::PhaseAverageOptions;

use crate::error::{config, SweepError};
use crate::gates::{build_gate, is_parameter, kind_name, parameter_names, parse_kind, resolve, ParamMap};

pub const DEFAULT_POINTS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = SweepError;
    fn from_str(s: &str) -> Result<Self, SweepError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(config(format!("unknown format '{s}' (csv | json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepAxis {
    pub fn linear(param: &str, from: f64, to: f64, points: usize) -> Self {
        Self { param: param.into(), from, to, points, scale: Scale::Linear }
    }

    pub fn log(param: &str, from: f64, to: f64, points: usize) -> Self {
        Self { param: param.into(), from, to, points, scale: Scale::Log }
    }

    /// Default axis: the coupling of each gate over a range that brackets
    /// its maximum.
    pub fn default_for(kind: GateKind) -> Self {
        match kind {
            GateKind::Ideal => Self::linear("gain", 0.0, 3.0, DEFAULT_POINTS),
            GateKind::Bs => Self::linear("transmissivity", 0.0, 1.0, DEFAULT_POINTS),
            GateKind::AtomLight | GateKind::Optomech => Self::linear("g_over_kappa", 0.005, 0.2, DEFAULT_POINTS),
            GateKind::AtomMech => Self::linear("g_over_kappa", 0.01, 0.2, DEFAULT_POINTS),
        }
    }

    /// Grid values; the end points are hit exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.from];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.from;
                }
                if i + 1 == self.points {
                    return self.to;
                }
                let i = i as f64;
                match self.scale {
                    Scale::Linear => self.from + (self.to - self.from) * i / last,
                    Scale::Log => (self.from.ln() + (self.to.ln() - self.from.ln()) * i / last).exp(),
                }
            })
            .collect()
    }

    /// `name=from:to:points[:log]`.
    pub fn parse(spec: &str) -> Result<Self, SweepError> {
        let bad = || config(format!("sweep '{spec}' is not name=from:to:points[:log|:linear]"));
        let (name, range) = spec.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        let scale = match parts.get(3).map(|s| s.trim()) {
            None | Some("linear") => Scale::Linear,
            Some("log") => Scale::Log,
            _ => return Err(bad()),
        };
        Ok(Self {
            param: name.trim().to_string(),
            from: num(parts[0])?,
            to: num(parts[1])?,
            points: parts[2].trim().parse().map_err(|_| bad())?,
            scale,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub gate: GateKind,
    /// Fixed parameters set explicitly; the rest take gate defaults.
    pub params: ParamMap,
    pub sweep: SweepAxis,
    pub p: Vec<f64>,
    pub input_threshold: bool,
    pub output_threshold: bool,
    /// Base occupation of the photon approximation.
    pub n: f64,
    pub phase: PhaseAverageOptions,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: Option<usize>,
    /// Series qualifier shown in the `param` column.
    pub label: Option<String>,
}

impl SweepConfig {
    pub fn new(gate: GateKind) -> Self {
        let phase = PhaseAverageOptions::default();
        Self {
            gate,
            params: ParamMap::new(),
            sweep: SweepAxis::default_for(gate),
            p: vec![1.0],
            input_threshold: false,
            output_threshold: true,
            n: phase.n,
            phase,
            out: None,
            format: Format::Csv,
            jobs: None,
            label: None,
        }
    }

    pub fn set(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.into(), value);
        self
    }

    pub fn with_sweep(mut self, axis: SweepAxis) -> Self {
        self.sweep = axis;
        self
    }

    pub fn with_p(mut self, p: &[f64]) -> Self {
        self.p = p.to_vec();
        self
    }

    pub fn with_thresholds(mut self, input: bool, output: bool) -> Self {
        self.input_threshold = input;
        self.output_threshold = output;
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Parameters at one grid value of the swept parameter.
    pub fn params_at(&self, value: f64) -> ParamMap {
        let mut p = resolve(self.gate, &self.params);
        p.insert(self.sweep.param.clone(), value);
        p
    }

    pub fn phase_options(&self) -> PhaseAverageOptions {
        PhaseAverageOptions { n: self.n, ..self.phase }
    }

    /// Name written to the `param` column.
    pub fn column_name(&self) -> String {
        match &self.label {
            Some(l) => format!("{}[{l}]", self.sweep.param),
            None => self.sweep.param.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let kind = kind_name(self.gate);
        for name in self.params.keys() {
            if !is_parameter(self.gate, name) {
                return Err(config(format!(
                    "'{name}' is not a {kind} parameter (expected one of {})",
                    parameter_names(self.gate).join(", ")
                )));
            }
        }
        let ax = &self.sweep;
        if !is_parameter(self.gate, &ax.param) {
            return Err(config(format!("swept parameter '{}' does not exist for {kind}", ax.param)));
        }
        if ax.points == 0 {
            return Err(config("sweep needs at least one point"));
        }
        if !(ax.from.is_finite() && ax.to.is_finite()) {
            return Err(config("sweep range must be finite"));
        }
        if ax.scale == Scale::Log && !(ax.from > 0.0 && ax.to > 0.0) {
            return Err(config("log sweep range must be positive"));
        }
        // the model has to exist at both ends of the range
        for v in [ax.from, ax.to] {
            build_gate(self.gate, &self.params_at(v))
                .map_err(|e| config(format!("{} = {v}: {e}", ax.param)))?;
        }
        if self.p.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(config("p values must lie in [0, 1]"));
        }
        if !(self.n > 0.0 && self.n <= 0.1) {
            return Err(config(format!("n = {} outside (0, 0.1]", self.n)));
        }
        self.phase.validate().map_err(|e| config(e.to_string()))?;
        if self.jobs == Some(0) {
            return Err(config("jobs must be at least 1"));
        }
        Ok(())
    }

    /// Reads the flat key/value text form (see the README for the grammar).
    /// `gate` may be omitted when `fallback` supplies the gate kind.
    pub fn from_text(text: &str, fallback: Option<GateKind>) -> Result<Self, SweepError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| config(e.to_string()))?;
        let gate = match table.get("gate") {
            Some(v) => {
                let s = v.as_str().ok_or_else(|| config("gate must be a string"))?;
                let kind = parse_kind(s).ok_or_else(|| config(format!("unknown gate '{s}'")))?;
                if let Some(f) = fallback.filter(|f| *f != kind) {
                    return Err(config(format!("config gate '{s}' conflicts with '{}'", kind_name(f))));
                }
                kind
            }
            None => fallback.ok_or_else(|| config("config has no 'gate'"))?,
        };
        let mut cfg = Self::new(gate);
        let mut axis_name = None;
        let (mut from, mut to, mut points, mut scale) = (None, None, None, None);
        for (key, value) in &table {
            match key.as_str() {
                "gate" => {}
                "sweep" => axis_name = Some(string(key, value)?),
                "from" => from = Some(number(key, value)?),
                "to" => to = Some(number(key, value)?),
                "points" => points = Some(count(key, value)?),
                "scale" => {
                    scale = Some(match string(key, value)?.as_str() {
                        "linear" => Scale::Linear,
                        "log" => Scale::Log,
                        s => return Err(config(format!("unknown scale '{s}'"))),
                    })
                }
                "p" => {
                    cfg.p = match value {
                        toml::Value::Array(a) => a.iter().map(|v| number(key, v)).collect::<Result<_, _>>()?,
                        v => vec![number(key, v)?],
                    }
                }
                "input_threshold" => cfg.input_threshold = boolean(key, value)?,
                "output_threshold" => cfg.output_threshold = boolean(key, value)?,
                "n" => cfg.n = number(key, value)?,
                "phase_samples" => cfg.phase.samples = count(key, value)?,
                "out" => cfg.out = Some(PathBuf::from(string(key, value)?)),
                "format" => cfg.format = string(key, value)?.parse()?,
                "jobs" => cfg.jobs = Some(count(key, value)?),
                "label" => cfg.label = Some(string(key, value)?),
                name if is_parameter(gate, name) => {
                    cfg.params.insert(name.to_string(), number(key, value)?);
                }
                other => return Err(config(format!("unknown key '{other}' for gate {}", kind_name(gate)))),
            }
        }
        if let Some(name) = axis_name {
            let d = SweepAxis::default_for(gate);
            let same = name == d.param;
            cfg.sweep = SweepAxis {
                from: from.or(same.then_some(d.from)).ok_or_else(|| config("sweep needs 'from'"))?,
                to: to.or(same.then_some(d.to)).ok_or_else(|| config("sweep needs 'to'"))?,
                points: points.unwrap_or(DEFAULT_POINTS),
                scale: scale.unwrap_or(Scale::Linear),
                param: name,
            };
        } else {
            let ax = &mut cfg.sweep;
            ax.from = from.unwrap_or(ax.from);
            ax.to = to.unwrap_or(ax.to);
            ax.points = points.unwrap_or(ax.points);
            ax.scale = scale.unwrap_or(ax.scale);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// The configuration as `(key, value)` pairs in the text grammar, for
    /// fidelity checks and provenance.
    pub fn describe(&self) -> Vec<(String, String)> {
        let mut out = vec![("gate".to_string(), kind_name(self.gate).to_string())];
        out.extend(self.params.iter().map(|(k, v)| (k.clone(), v.to_string())));
        let ax = &self.sweep;
        out.push(("sweep".into(), ax.param.clone()));
        out.push(("from".into(), ax.from.to_string()));
        out.push(("to".into(), ax.to.to_string()));
        out.push(("points".into(), ax.points.to_string()));
        out.push(("scale".into(), if ax.scale == Scale::Log { "log" } else { "linear" }.into()));
        let p: Vec<String> = self.p.iter().map(f64::to_string).collect();
        out.push(("p".into(), p.join(",")));
        out.push(("input_threshold".into(), self.input_threshold.to_string()));
        out.push(("output_threshold".into(), self.output_threshold.to_string()));
        out
    }
}

fn number(key: &str, v: &toml::Value) -> Result<f64, SweepError> {
    match v {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        _ => Err(config(format!("'{key}' must be a number"))),
    }
}

fn count(key: &str, v: &toml::Value) -> Result<usize, SweepError> {
    v.as_integer()
        .and_then(|i| usize::try_from(i).ok())
        .ok_or_else(|| config(format!("'{key}' must be a non-negative integer")))
}

fn string(key: &str, v: &toml::Value) -> Result<String, SweepError> {
    v.as_str().map(str::to_string).ok_or_else(|| config(format!("'{key}' must be a string")))
}

fn boolean(key: &str, v: &toml::Value) -> Result<bool, SweepError> {
    v.as_bool().ok_or_else(|| config(format!("'{key}' must be true or false")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_end_points_are_exact() {
        let v = SweepAxis::log("g_over_kappa", 0.005, 0.2, 7).values();
        assert_eq!((v[0], v[6]), (0.005, 0.2));
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        let l = SweepAxis::linear("gain", 0.0, 3.0, 4).values();
        assert_eq!(l, vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(SweepAxis::linear("gain", 0.5, 3.0, 1).values(), vec![0.5]);
    }

    #[test]
    fn text_form() {
        let cfg = SweepConfig::from_text(
            "gate = \"atom-light\"\nsweep = \"g_over_kappa\"\nfrom = 0.01\nto = 0.1\npoints = 5\n\
             p = [1, 0.78]\nkappa_tau = 50\ninput_threshold = true\nformat = \"json\"\n",
            None,
        )
        .unwrap();
        assert_eq!(cfg.gate, GateKind::AtomLight);
        assert_eq!(cfg.sweep, SweepAxis::linear("g_over_kappa", 0.01, 0.1, 5));
        assert_eq!(cfg.p, vec![1.0, 0.78]);
        assert_eq!(cfg.params["kappa_tau"], 50.0);
        assert!(cfg.input_threshold && cfg.format == Format::Json);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            "gate = \"ideal\"\nkappa_tau = 3",
            "gate = \"atom-light\"\nsweep = \"gain\"\nfrom = 0\nto = 1",
            "gate = \"atom-light\"\nsweep = \"eta\"\nfrom = 0.5\nto = 1.5",
            "gate = \"ideal\"\nscale = \"log\"",
            "gate = \"ideal\"\np = 1.5",
            "gate = \"warp\"",
            "gate = \"ideal\"\nmystery = 1",
            "gate = \"ideal\"\nphase_samples = 7",
            "gate = ",
        ];
        for text in bad {
            let e = SweepConfig::from_text(text, None).unwrap_err();
            assert_eq!(e.exit_code(), 1, "{text}");
        }
        assert!(SweepConfig::from_text("gate = \"bs\"", Some(GateKind::Ideal)).is_err());
        assert!(SweepConfig::from_text("points = 3", Some(GateKind::Ideal)).is_ok());
    }

    #[test]
    fn axis_spec() {
        assert_eq!(SweepAxis::parse("gain=0:3:31").unwrap(), SweepAxis::linear("gain", 0.0, 3.0, 31));
        assert_eq!(SweepAxis::parse("kappa_tau=10:1000:9:log").unwrap(), SweepAxis::log("kappa_tau", 10.0, 1000.0, 9));
        assert!(SweepAxis::parse("gain=0:3").is_err());
    }
}
