//! Maximum of the HOM element over one or two free gate parameters.

use hom_metrics::{hom_element_for_gate, InputSpec};
use physical_gates::GateKind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thresholds::simplex_maximize;

use crate::error::{config, SweepError};
use crate::gates::{build_gate, is_parameter, kind_name, resolve, ParamMap};
use crate::sweep::with_pool;

#[derive(Debug, Clone, PartialEq)]
pub struct FreeParam {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl FreeParam {
    pub fn new(name: &str, lo: f64, hi: f64) -> Self {
        Self { name: name.into(), lo, hi }
    }

    /// `name=lo:hi`.
    pub fn parse(spec: &str) -> Result<Self, SweepError> {
        let bad = || config(format!("free parameter '{spec}' is not name=lo:hi"));
        let (name, range) = spec.split_once('=').ok_or_else(bad)?;
        let (lo, hi) = range.split_once(':').ok_or_else(bad)?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        Ok(Self::new(name.trim(), num(lo)?, num(hi)?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimumSpec {
    pub gate: GateKind,
    pub params: ParamMap,
    pub free: Vec<FreeParam>,
    /// Input `p` of both modes.
    pub p: f64,
    pub n: f64,
    /// Grid points per free axis before the simplex refinement.
    pub grid: usize,
}

impl OptimumSpec {
    pub fn new(gate: GateKind, free: Vec<FreeParam>) -> Self {
        let grid = if free.len() == 1 { 41 } else { 15 };
        Self { gate, params: ParamMap::new(), free, p: 1.0, n: 1e-3, grid }
    }

    pub fn set(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.into(), value);
        self
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if !(1..=2).contains(&self.free.len()) {
            return Err(config("optimum needs one or two free parameters"));
        }
        for f in &self.free {
            if !is_parameter(self.gate, &f.name) {
                return Err(config(format!("'{}' is not a {} parameter", f.name, kind_name(self.gate))));
            }
            if !(f.lo.is_finite() && f.hi.is_finite() && f.hi > f.lo) {
                return Err(config(format!("range of '{}' must be bounded with lo < hi", f.name)));
            }
        }
        if self.free.len() == 2 && self.free[0].name == self.free[1].name {
            return Err(config("free parameters must differ"));
        }
        for name in self.params.keys() {
            if !is_parameter(self.gate, name) {
                return Err(config(format!("'{name}' is not a {} parameter", kind_name(self.gate))));
            }
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(config("p must lie in [0, 1]"));
        }
        if self.grid < 3 {
            return Err(config("optimum grid needs at least 3 points per axis"));
        }
        Ok(())
    }

    fn objective(&self, x: &[f64]) -> Result<f64, SweepError> {
        let mut p = resolve(self.gate, &self.params);
        for (f, v) in self.free.iter().zip(x) {
            p.insert(f.name.clone(), v.clamp(f.lo, f.hi));
        }
        let model = build_gate(self.gate, &p).map_err(|e| SweepError::Numeric(e.to_string()))?;
        let input = InputSpec::symmetric(self.p).with_occupation(self.n);
        hom_element_for_gate(&model, &input).map(|r| r.value).map_err(|e| SweepError::Numeric(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumRecord {
    pub argmax: Vec<(String, f64)>,
    pub value: f64,
    /// False when any coordinate sits on its range boundary.
    pub interior: bool,
    pub boundary: Vec<String>,
}

impl OptimumRecord {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.argmax.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

/// Grid search over the free parameters, then a simplex refinement from the
/// best cell, kept inside the ranges. A boundary optimum is flagged.
pub fn find_optimum(spec: &OptimumSpec, jobs: usize) -> Result<OptimumRecord, SweepError> {
    spec.validate()?;
    let axes: Vec<Vec<f64>> = spec
        .free
        .iter()
        .map(|f| (0..spec.grid).map(|i| f.lo + (f.hi - f.lo) * i as f64 / (spec.grid - 1) as f64).collect())
        .collect();
    let cells: Vec<Vec<f64>> = match axes.as_slice() {
        [a] => a.iter().map(|x| vec![*x]).collect(),
        [a, b] => a.iter().flat_map(|x| b.iter().map(move |y| vec![*x, *y])).collect(),
        _ => unreachable!("validated"),
    };
    let values: Vec<Result<f64, SweepError>> =
        with_pool(jobs, || cells.par_iter().map(|c| spec.objective(c)).collect())?;
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.iter().enumerate() {
        if let Ok(v) = v {
            if best.is_none_or(|(_, b)| *v > b) {
                best = Some((i, *v));
            }
        }
    }
    let (i, v0) = best.ok_or_else(|| match &values[0] {
        Err(e) => SweepError::Numeric(format!("objective failed on the whole grid: {e}")),
        Ok(_) => unreachable!(),
    })?;
    let start = cells[i].clone();
    let step: Vec<f64> = spec
        .free
        .iter()
        .zip(&start)
        .map(|(f, x)| {
            let h = 0.5 * (f.hi - f.lo) / (spec.grid - 1) as f64;
            if x + h <= f.hi {
                h
            } else {
                -h
            }
        })
        .collect();
    let (x, v) = simplex_maximize(&|x: &[f64]| spec.objective(x), &start, &step, 300, 1e-12)?;
    let (x, value) = if v >= v0 { (x, v) } else { (start, v0) };
    let mut boundary = Vec::new();
    let argmax: Vec<(String, f64)> = spec
        .free
        .iter()
        .zip(&x)
        .map(|(f, x)| {
            let x = x.clamp(f.lo, f.hi);
            let margin = 1e-3 * (f.hi - f.lo);
            if x - f.lo < margin || f.hi - x < margin {
                boundary.push(f.name.clone());
            }
            (f.name.clone(), x)
        })
        .collect();
    Ok(OptimumRecord { argmax, value, interior: boundary.is_empty(), boundary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_gain_optimum() {
        let spec = OptimumSpec::new(GateKind::Ideal, vec![FreeParam::new("gain", 0.0, 3.0)]);
        let r = find_optimum(&spec, 1).unwrap();
        let g = r.get("gain").unwrap();
        assert!((g - (11.0 - 105f64.sqrt()).sqrt()).abs() < 1e-3, "{g}");
        assert!((r.value - 0.2608).abs() < 1e-3 && r.interior);
    }

    #[test]
    fn boundary_is_flagged() {
        let spec = OptimumSpec::new(GateKind::Ideal, vec![FreeParam::new("gain", 0.0, 0.5)]);
        let r = find_optimum(&spec, 1).unwrap();
        assert!(!r.interior && r.boundary == vec!["gain".to_string()]);
        assert_eq!(r.get("gain"), Some(0.5));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(OptimumSpec::new(GateKind::Ideal, vec![]).validate().is_err());
        assert!(OptimumSpec::new(GateKind::Ideal, vec![FreeParam::new("eta", 0.1, 1.0)]).validate().is_err());
        assert!(OptimumSpec::new(GateKind::Ideal, vec![FreeParam::new("gain", 1.0, 1.0)]).validate().is_err());
        assert!(FreeParam::parse("gain=0:2").is_ok() && FreeParam::parse("gain").is_err());
    }
}
