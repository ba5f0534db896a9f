//! Experiment records: one JSON line per factoring run, and the averaged
//! benchmark table row.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Factored { factors: [String; 2] },
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: String,
    pub n_bits: u64,
    pub lattice_dim: usize,
    pub factor_base_size: usize,
    pub lattices_tested: u64,
    pub candidates_extracted: u64,
    pub total_sr_pairs: u64,
    pub unique_sr_pairs: u64,
    pub unique_per_lattice_pct: Option<f64>,
    pub wall_time_seconds: f64,
    pub heuristic: String,
    pub seed: u64,
    pub outcome: Outcome,
}

impl ExperimentRecord {
    pub fn factored(&self) -> bool {
        matches!(self.outcome, Outcome::Factored { .. })
    }

    /// The same record with the wall time zeroed, for reproducibility checks.
    pub fn without_time(&self) -> Self {
        Self {
            wall_time_seconds: 0.0,
            ..self.clone()
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[ExperimentRecord]) -> Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_json_line()).map_err(io_err)?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|e| Error::InvalidArgument(format!("line {}: {e}", i + 1)))?;
        out.push(record);
    }
    Ok(out)
}

pub(crate) fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("i/o error: {e}"))
}

pub const TABLE_HEADER: [&str; 8] = [
    "Input bit length",
    "Lattice dimension",
    "Lattices tested",
    "Candidates extracted",
    "Total SR pairs",
    "Unique SR pairs",
    "Unique SR per lattice %",
    "Time (s)",
];

/// One averaged benchmark row.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub bits: u64,
    pub lattice_dim: usize,
    pub lattices_tested: f64,
    pub candidates_extracted: f64,
    pub total_sr_pairs: f64,
    pub unique_sr_pairs: f64,
    pub unique_per_lattice_pct: f64,
    pub time_seconds: f64,
    pub trials: usize,
    pub factored: usize,
}

impl TableRow {
    /// Means over `records`; the percentage is the mean of per-run percentages.
    pub fn average(bits: u64, lattice_dim: usize, records: &[ExperimentRecord]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::InvalidArgument("no records to average".into()));
        }
        let k = records.len() as f64;
        let mean = |f: &dyn Fn(&ExperimentRecord) -> f64| records.iter().map(f).sum::<f64>() / k;
        Ok(Self {
            bits,
            lattice_dim,
            lattices_tested: mean(&|r| r.lattices_tested as f64),
            candidates_extracted: mean(&|r| r.candidates_extracted as f64),
            total_sr_pairs: mean(&|r| r.total_sr_pairs as f64),
            unique_sr_pairs: mean(&|r| r.unique_sr_pairs as f64),
            unique_per_lattice_pct: mean(&|r| r.unique_per_lattice_pct.unwrap_or(0.0)),
            time_seconds: mean(&|r| r.wall_time_seconds),
            trials: records.len(),
            factored: records.iter().filter(|r| r.factored()).count(),
        })
    }

    pub fn fields(&self) -> [String; 8] {
        [
            self.bits.to_string(),
            self.lattice_dim.to_string(),
            format!("{:.2}", self.lattices_tested),
            format!("{:.2}", self.candidates_extracted),
            format!("{:.2}", self.total_sr_pairs),
            format!("{:.2}", self.unique_sr_pairs),
            format!("{:.2}", self.unique_per_lattice_pct),
            format!("{:.3}", self.time_seconds),
        ]
    }
}

pub fn write_table<W: Write>(out: W, rows: &[TableRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(TABLE_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.fields()).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}
