use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use physical_gates::GateKind;
use serde::Serialize;
use sweep_cli::emit::{format_float, to_json_value};
use sweep_cli::gates::resolve;
use sweep_cli::{
    emit, find_optimum, parse_kind, preset, resolve_jobs, run_series, Format, FreeParam, OptimumSpec, SweepAxis,
    SweepConfig, SweepError, ThresholdCache, PRESET_NAMES,
};
use thresholds::{input_threshold, output_threshold};

/// HOM elements of QND gates: sweeps, thresholds, optima and figure presets.
#[derive(Debug, Parser)]
#[command(name = "qnd-hom", version)]
struct Cli {
    /// Flat key/value config file; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, global = true)]
    format: Option<String>,
    /// Worker threads.
    #[arg(long, global = true, env = "QND_HOM_JOBS")]
    jobs: Option<usize>,
    /// Base occupation of the photon approximation.
    #[arg(long, global = true)]
    n: Option<f64>,
    /// Phase samples per angle for the input threshold.
    #[arg(long = "phase-samples", global = true)]
    phase_samples: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the noise-free QND gate.
    Ideal(SweepArgs),
    /// Sweep the beam splitter.
    Bs(SweepArgs),
    /// Sweep the atom-light gate.
    AtomLight(SweepArgs),
    /// Sweep the optomechanical gate.
    Optomech(SweepArgs),
    /// Sweep the atom-mechanical gate.
    AtomMech(SweepArgs),
    /// Input and output thresholds at one parameter point.
    Threshold {
        gate: String,
        /// Fixed parameter, name=value (repeatable).
        #[arg(long = "set")]
        set: Vec<String>,
    },
    /// Maximize the HOM element over one or two parameters.
    Optimum {
        gate: String,
        /// Free parameter, name=lo:hi (once or twice).
        #[arg(long = "free", required = true)]
        free: Vec<String>,
        #[arg(long = "set")]
        set: Vec<String>,
        /// Input p of both modes.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Grid points per free axis.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Run a figure preset.
    Preset {
        name: Option<String>,
        /// List the preset names.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Swept parameter, name=from:to:points[:log].
    #[arg(long)]
    sweep: Option<String>,
    /// Fixed parameter, name=value (repeatable).
    #[arg(long = "set")]
    set: Vec<String>,
    /// Comma-separated input p values.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Compute the phase-randomized input threshold at every point.
    #[arg(long)]
    input_threshold: bool,
    /// Leave the output-threshold column empty.
    #[arg(long)]
    no_output_threshold: bool,
}

fn parse_set(spec: &str) -> Result<(String, f64), SweepError> {
    let bad = || SweepError::Config(format!("'{spec}' is not name=value"));
    let (k, v) = spec.split_once('=').ok_or_else(bad)?;
    Ok((k.trim().to_string(), v.trim().parse().map_err(|_| bad())?))
}

fn gate_kind(s: &str) -> Result<GateKind, SweepError> {
    parse_kind(s).ok_or_else(|| SweepError::Config(format!("unknown gate '{s}'")))
}

fn load(cli: &Cli, fallback: Option<GateKind>) -> Result<Option<SweepConfig>, SweepError> {
    match &cli.config {
        Some(path) => Ok(Some(SweepConfig::from_text(&std::fs::read_to_string(path)?, fallback)?)),
        None => Ok(None),
    }
}

fn apply_globals(cli: &Cli, cfg: &mut SweepConfig) -> Result<(), SweepError> {
    if let Some(n) = cli.n {
        cfg.n = n;
    }
    if let Some(s) = cli.phase_samples {
        cfg.phase.samples = s;
    }
    if let Some(f) = &cli.format {
        cfg.format = f.parse()?;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    }
    if cli.jobs.is_some() {
        cfg.jobs = cli.jobs;
    }
    Ok(())
}

fn sweep(cli: &Cli, kind: GateKind, args: &SweepArgs) -> Result<(), SweepError> {
    let mut cfg = load(cli, Some(kind))?.unwrap_or_else(|| SweepConfig::new(kind));
    if let Some(s) = &args.sweep {
        cfg.sweep = SweepAxis::parse(s)?;
    }
    for s in &args.set {
        let (k, v) = parse_set(s)?;
        cfg.params.insert(k, v);
    }
    if let Some(p) = &args.p {
        cfg.p = p.clone();
    }
    cfg.input_threshold |= args.input_threshold;
    cfg.output_threshold &= !args.no_output_threshold;
    run(cli, vec![cfg])
}

fn run(cli: &Cli, mut series: Vec<SweepConfig>) -> Result<(), SweepError> {
    for cfg in &mut series {
        apply_globals(cli, cfg)?;
        cfg.validate()?;
    }
    let head = &series[0];
    let table = run_series(&series, resolve_jobs(head.jobs), &ThresholdCache::new())?;
    emit(&table, head.format, head.out.as_deref())
}

fn write_record<T: Serialize>(record: &T, header: &[&str], fields: Vec<String>, cli: &Cli) -> Result<(), SweepError> {
    let format = cli.format.as_deref().map(str::parse).transpose()?.unwrap_or(Format::Csv);
    let text = match format {
        Format::Json => to_json_value(record)? + "\n",
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            let io = |e: csv::Error| SweepError::Io(e.into());
            w.write_record(header).map_err(io)?;
            w.write_record(&fields).map_err(io)?;
            String::from_utf8(w.into_inner().map_err(|e| SweepError::Io(e.into_error()))?).expect("utf-8")
        }
    };
    write_out(cli.out.as_deref(), text.as_bytes())
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<(), SweepError> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct ThresholdRecord {
    gate: String,
    input_threshold: f64,
    amplitude_a: f64,
    amplitude_b: f64,
    phase_samples: usize,
    converged: bool,
    output_threshold: f64,
    warnings: String,
}

fn threshold(cli: &Cli, gate: &str, set: &[String]) -> Result<(), SweepError> {
    let kind = gate_kind(gate)?;
    let mut cfg = load(cli, Some(kind))?.unwrap_or_else(|| SweepConfig::new(kind));
    for s in set {
        let (k, v) = parse_set(s)?;
        cfg.params.insert(k, v);
    }
    apply_globals(cli, &mut cfg)?;
    // only the fixed parameters matter here
    let params = resolve(kind, &cfg.params);
    let at = params[&cfg.sweep.param];
    cfg.sweep = SweepAxis::linear(&cfg.sweep.param, at, at, 1);
    cfg.validate()?;
    let model = sweep_cli::build_gate(kind, &params).map_err(|e| SweepError::Config(e.to_string()))?;
    let t = input_threshold(&model, &cfg.phase_options()).map_err(|e| SweepError::Numeric(e.to_string()))?;
    let warnings: Vec<String> = t.warnings.iter().map(ToString::to_string).collect();
    let rec = ThresholdRecord {
        gate: gate.to_string(),
        input_threshold: t.value,
        amplitude_a: t.argmax.0,
        amplitude_b: t.argmax.1,
        phase_samples: t.samples,
        converged: t.converged,
        output_threshold: output_threshold(),
        warnings: warnings.join(";"),
    };
    let fields = vec![
        rec.gate.clone(),
        format_float(rec.input_threshold),
        format_float(rec.amplitude_a),
        format_float(rec.amplitude_b),
        rec.phase_samples.to_string(),
        rec.converged.to_string(),
        format_float(rec.output_threshold),
        rec.warnings.clone(),
    ];
    let header = [
        "gate",
        "input_threshold",
        "amplitude_a",
        "amplitude_b",
        "phase_samples",
        "converged",
        "output_threshold",
        "warnings",
    ];
    write_record(&rec, &header, fields, cli)
}

fn optimum(cli: &Cli, gate: &str, free: &[String], set: &[String], p: f64, grid: Option<usize>) -> Result<(), SweepError> {
    let kind = gate_kind(gate)?;
    let free = free.iter().map(|s| FreeParam::parse(s)).collect::<Result<Vec<_>, _>>()?;
    let mut spec = OptimumSpec::new(kind, free);
    spec.p = p;
    if let Some(cfg) = load(cli, Some(kind))? {
        spec.params = cfg.params;
        spec.n = cfg.n;
    }
    for s in set {
        let (k, v) = parse_set(s)?;
        spec.params.insert(k, v);
    }
    if let Some(n) = cli.n {
        spec.n = n;
    }
    if let Some(g) = grid {
        spec.grid = g;
    }
    let rec = find_optimum(&spec, resolve_jobs(cli.jobs))?;
    let mut header = vec!["value", "interior"];
    let mut fields = vec![format_float(rec.value), rec.interior.to_string()];
    for (k, v) in &rec.argmax {
        header.push(k);
        fields.push(format_float(*v));
    }
    write_record(&rec, &header, fields, cli)
}

fn dispatch(cli: &Cli) -> Result<(), SweepError> {
    match &cli.command {
        None => {
            let cfg = load(cli, None)?
                .ok_or_else(|| SweepError::Config("give a subcommand or --config <file>".into()))?;
            run(cli, vec![cfg])
        }
        Some(Command::Ideal(a)) => sweep(cli, GateKind::Ideal, a),
        Some(Command::Bs(a)) => sweep(cli, GateKind::Bs, a),
        Some(Command::AtomLight(a)) => sweep(cli, GateKind::AtomLight, a),
        Some(Command::Optomech(a)) => sweep(cli, GateKind::Optomech, a),
        Some(Command::AtomMech(a)) => sweep(cli, GateKind::AtomMech, a),
        Some(Command::Threshold { gate, set }) => threshold(cli, gate, set),
        Some(Command::Optimum { gate, free, set, p, grid }) => optimum(cli, gate, free, set, *p, *grid),
        Some(Command::Preset { list: true, .. }) => {
            let text: String = PRESET_NAMES
                .iter()
                .map(|n| format!("{n}\t{}\n", preset(n).expect("listed").summary))
                .collect();
            write_out(None, text.as_bytes())
        }
        Some(Command::Preset { name: Some(name), .. }) => {
            let p = preset(name).ok_or_else(|| {
                SweepError::Config(format!("unknown preset '{name}' (one of {})", PRESET_NAMES.join(", ")))
            })?;
            run(cli, p.series)
        }
        Some(Command::Preset { name: None, .. }) => Err(SweepError::Config("preset needs a name or --list".into())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qnd-hom: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
