//! Trace rows and their CSV / JSON-lines encodings.
//!
//! CSV carries a header row naming the eleven columns followed by one data
//! row per tick: RFC-4180 quoting, `.` decimal separator, LF line endings.
//! JSON lines carries one header object (artifact version, seed, generator
//! name, every config value) followed by one object per tick whose keys match
//! the CSV columns. Both encodings round-trip losslessly for the fields they
//! carry.

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moore::mlp::{PathwayOutput, PathwayState, PathwaySymbol};
use crate::nanomachine::CycleSnapshot;
use crate::pipeline::{StageCoefficients, Thresholds};

/// Column names, in field order of [`TraceRow`].
pub const COLUMNS: [&str; 11] = [
    "tick",
    "h",
    "s",
    "m",
    "v",
    "r",
    "symbol",
    "state_before",
    "state_after",
    "output",
    "wait",
];

/// One simulation tick: the five stage aggregates, the classified symbol, the
/// machine step it drove, and the wait line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub tick: u64,
    /// Cumulative reception aggregate.
    pub h: f64,
    /// Medulla synapsing aggregate.
    pub s: f64,
    /// Secondary afferent aggregate.
    pub m: f64,
    /// Ventral posterolateral potential aggregate.
    pub v: f64,
    /// Received strength (h + s + m + v).
    pub r: f64,
    pub symbol: PathwaySymbol,
    pub state_before: PathwayState,
    pub state_after: PathwayState,
    pub output: PathwayOutput,
    /// True when the step was a self-loop (no pathway progress this tick).
    pub wait: bool,
}

/// Reproducibility record written ahead of the rows in JSON-lines traces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    /// Artifact version.
    pub version: String,
    /// Name of the random generator algorithm.
    pub generator: String,
    pub seed: u64,
    pub dt: f64,
    pub max_ticks: u64,
    pub noise: String,
    pub noise_mean: f64,
    pub noise_spread: f64,
    pub feedback_gain: f64,
    pub thresholds: Thresholds,
    pub coefficients: StageCoefficients,
    pub receptor: String,
    pub amplitude: f64,
    pub frequency_hz: f64,
    pub duration_s: f64,
    pub adaptation_tau_s: f64,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace i/o failed: {0}")]
    Io(#[from] io::Error),
    #[error("csv encoding failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("json-lines trace has no header object")]
    MissingHeader,
}

/// Writes rows as CSV. An empty trace still gets the header row.
pub fn write_csv<W: io::Write>(rows: &[TraceRow], writer: W) -> Result<(), TraceError> {
    let mut csv_writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    csv_writer.write_record(COLUMNS)?;
    for row in rows {
        csv_writer.serialize(row)?;
    }
    csv_writer.flush()?;
    Ok(())
}

/// Reads rows back from CSV produced by [`write_csv`].
pub fn read_csv<R: io::Read>(reader: R) -> Result<Vec<TraceRow>, TraceError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in csv_reader.deserialize() {
        rows.push(record?);
    }
    Ok(rows)
}

/// Writes the header object then one object per row, LF separated.
pub fn write_jsonl<W: io::Write>(
    header: &TraceHeader,
    rows: &[TraceRow],
    mut writer: W,
) -> Result<(), TraceError> {
    serde_json::to_writer(&mut writer, header)?;
    writer.write_all(b"\n")?;
    for row in rows {
        serde_json::to_writer(&mut writer, row)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Column names for nanomachine cycle traces, in field order of
/// [`CycleSnapshot`].
pub const CYCLE_COLUMNS: [&str; 6] = ["cycle", "state", "d_line", "output", "wait", "output_value"];

/// Writes nanomachine cycle snapshots as CSV, one row per cycle. Unasserted
/// lines and absent output values become empty fields.
pub fn write_cycles_csv<W: io::Write>(
    cycles: &[CycleSnapshot],
    writer: W,
) -> Result<(), TraceError> {
    let mut csv_writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    csv_writer.write_record(CYCLE_COLUMNS)?;
    for cycle in cycles {
        csv_writer.serialize(cycle)?;
    }
    csv_writer.flush()?;
    Ok(())
}

/// Writes nanomachine cycle snapshots as JSON lines, one object per cycle.
pub fn write_cycles_jsonl<W: io::Write>(
    cycles: &[CycleSnapshot],
    mut writer: W,
) -> Result<(), TraceError> {
    for cycle in cycles {
        serde_json::to_writer(&mut writer, cycle)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a JSON-lines trace back into its header and rows.
pub fn read_jsonl<R: io::BufRead>(reader: R) -> Result<(TraceHeader, Vec<TraceRow>), TraceError> {
    let mut lines = reader.lines();
    let header_line = lines.next().ok_or(TraceError::MissingHeader)??;
    let header: TraceHeader = serde_json::from_str(&header_line)?;
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        rows.push(serde_json::from_str(&line)?);
    }
    Ok((header, rows))
}
