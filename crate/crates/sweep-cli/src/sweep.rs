//! Grid evaluation of HOM elements and thresholds.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use hom_metrics::{hom_element_for_gate, InputSpec};
use physical_gates::GateKind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thresholds::{input_threshold, output_threshold, ThresholdResult};

use crate::config::SweepConfig;
use crate::error::SweepError;
use crate::gates::{build_gate, ParamMap};

/// One output line: a grid point at one input `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub p: f64,
    pub hom: Option<f64>,
    /// Size of the finite-occupation correction.
    pub hom_err: Option<f64>,
    pub input_threshold: Option<f64>,
    pub output_threshold: Option<f64>,
    pub warnings: String,
}

pub type SweepTable = Vec<SweepRow>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    gate: GateKind,
    params: Vec<(String, u64)>,
    n: u64,
    samples: usize,
}

type Slot = Arc<OnceLock<Result<ThresholdResult, String>>>;

/// Input thresholds by (gate kind, parameters). Each entry is written once;
/// concurrent requests for the same key wait for the first computation.
#[derive(Debug, Default)]
pub struct ThresholdCache {
    slots: Mutex<HashMap<CacheKey, Slot>>,
}

impl ThresholdCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn get(&self, cfg: &SweepConfig, params: &ParamMap) -> Result<ThresholdResult, String> {
        let opts = cfg.phase_options();
        let key = CacheKey {
            gate: cfg.gate,
            params: params.iter().map(|(k, v)| (k.clone(), v.to_bits())).collect(),
            n: opts.n.to_bits(),
            samples: opts.samples,
        };
        let slot = self.slots.lock().expect("cache lock").entry(key).or_default().clone();
        slot.get_or_init(|| {
            let model = build_gate(cfg.gate, params).map_err(|e| e.to_string())?;
            input_threshold(&model, &opts).map_err(|e| e.to_string())
        })
        .clone()
    }
}

fn evaluate_point(cfg: &SweepConfig, value: f64, cache: &ThresholdCache) -> Vec<SweepRow> {
    let params = cfg.params_at(value);
    let mut warnings = Vec::new();
    let model = build_gate(cfg.gate, &params).map_err(|e| warnings.push(format!("gate-error({e})"))).ok();
    let input = if cfg.input_threshold {
        match cache.get(cfg, &params) {
            Ok(t) => {
                warnings.extend(t.warnings.iter().map(ToString::to_string));
                Some(t.value)
            }
            Err(e) if model.is_some() => {
                warnings.push(format!("threshold-error({e})"));
                None
            }
            Err(_) => None,
        }
    } else {
        None
    };
    let output = cfg.output_threshold.then(output_threshold);
    let param = cfg.column_name();
    cfg.p
        .iter()
        .map(|&p| {
            let mut w = warnings.clone();
            let res = model.as_ref().map(|m| hom_element_for_gate(m, &InputSpec::symmetric(p).with_occupation(cfg.n)));
            let (hom, hom_err) = match res {
                Some(Ok(r)) => (Some(r.value), Some(r.error_estimate)),
                Some(Err(e)) => {
                    w.push(format!("hom-error({e})"));
                    (None, None)
                }
                None => (None, None),
            };
            SweepRow {
                param: param.clone(),
                value,
                p,
                hom,
                hom_err,
                input_threshold: input,
                output_threshold: output,
                warnings: w.join(";"),
            }
        })
        .collect()
}

/// Worker count: explicit value, else `QND_HOM_JOBS`, else the core count.
pub fn resolve_jobs(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| std::env::var("QND_HOM_JOBS").ok().and_then(|s| s.trim().parse().ok()))
        .filter(|j| *j > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, SweepError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SweepError::Numeric(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Evaluates every grid point of every series, in order. Rows come out in
/// grid order and then `p` order regardless of the worker count.
pub fn run_series(series: &[SweepConfig], jobs: usize, cache: &ThresholdCache) -> Result<SweepTable, SweepError> {
    for cfg in series {
        cfg.validate()?;
    }
    let tasks: Vec<(&SweepConfig, f64)> =
        series.iter().flat_map(|c| c.sweep.values().into_iter().map(move |v| (c, v))).collect();
    let rows: Vec<Vec<SweepRow>> =
        with_pool(jobs, || tasks.par_iter().map(|(c, v)| evaluate_point(c, *v, cache)).collect())?;
    let rows: SweepTable = rows.into_iter().flatten().collect();
    if !rows.is_empty() && rows.iter().all(|r| r.hom.is_none()) {
        let first = rows[0].warnings.clone();
        return Err(SweepError::Numeric(format!("every grid point failed; first: {first}")));
    }
    Ok(rows)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable, SweepError> {
    run_series(std::slice::from_ref(cfg), resolve_jobs(cfg.jobs), &ThresholdCache::new())
}
