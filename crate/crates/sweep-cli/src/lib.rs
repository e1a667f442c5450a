//! Parameter sweeps of QND-gate HOM elements: configuration, figure presets,
//! optimum search and CSV/JSON output.

pub mod config;
pub mod emit;
pub mod error;
pub mod gates;
pub mod optimum;
pub mod presets;
pub mod sweep;

pub use config::{Format, Scale, SweepAxis, SweepConfig, DEFAULT_POINTS};
pub use emit::{emit, parse_json, render, write_csv, write_json, CSV_HEADER};
pub use error::SweepError;
pub use gates::{build_gate, default_parameters, kind_name, parameter_names, parse_kind, ParamMap};
pub use optimum::{find_optimum, FreeParam, OptimumRecord, OptimumSpec};
pub use presets::{all_presets, preset, Preset, PRESET_NAMES};
pub use sweep::{resolve_jobs, run_series, run_sweep, SweepRow, SweepTable, ThresholdCache};
