//! CSV and JSON writers. Floats carry 17 significant digits, lines end in LF.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

use crate::config::Format;
use crate::error::SweepError;
use crate::sweep::{SweepRow, SweepTable};

pub const CSV_HEADER: [&str; 8] =
    ["param", "value", "p", "hom", "hom_err", "input_threshold", "output_threshold", "warnings"];

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// Compact JSON with every float written as `{:.16e}`.
struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        CompactFormatter.write_f32(writer, value)
    }
}

pub fn to_json_value<T: Serialize>(value: &T) -> Result<String, SweepError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser).map_err(|e| SweepError::Io(io::Error::other(e)))?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn write_csv<W: Write>(table: &[SweepRow], out: W) -> Result<(), SweepError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| SweepError::Io(e.into());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in table {
        w.write_record([
            r.param.clone(),
            format_float(r.value),
            format_float(r.p),
            opt(r.hom),
            opt(r.hom_err),
            opt(r.input_threshold),
            opt(r.output_threshold),
            r.warnings.clone(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// A JSON array, one row object per line.
pub fn write_json<W: Write>(table: &[SweepRow], mut out: W) -> Result<(), SweepError> {
    out.write_all(b"[")?;
    for (i, r) in table.iter().enumerate() {
        out.write_all(if i == 0 { b"\n" } else { b",\n" })?;
        out.write_all(to_json_value(r)?.as_bytes())?;
    }
    out.write_all(if table.is_empty() { b"]\n" } else { b"\n]\n" })?;
    out.flush()?;
    Ok(())
}

pub fn render(table: &SweepTable, format: Format) -> Result<Vec<u8>, SweepError> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(table, &mut buf)?,
        Format::Json => write_json(table, &mut buf)?,
    }
    Ok(buf)
}

/// Writes the table to `path`, or to stdout when `path` is `None`.
pub fn emit(table: &SweepTable, format: Format, path: Option<&Path>) -> Result<(), SweepError> {
    let bytes = render(table, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

pub fn parse_json(text: &str) -> Result<SweepTable, SweepError> {
    serde_json::from_str(text).map_err(|e| SweepError::Io(io::Error::other(e)))
}
