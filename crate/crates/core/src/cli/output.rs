use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::harness::{BoundCheckRow, SweepReport};
use crate::valuation::Valuation;

pub const CSV_HEADER: &str = "e,k,i,nu,bound,slack,equal";

/// A row as written to CSV and JSON reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowRecord {
    pub e: u32,
    pub k: u64,
    pub i: Option<u64>,
    pub nu: Valuation,
    pub bound: i64,
    pub slack: Valuation,
    pub equal: u8,
}

impl From<&BoundCheckRow> for RowRecord {
    fn from(r: &BoundCheckRow) -> Self {
        RowRecord {
            e: r.e,
            k: r.k,
            i: r.i,
            nu: r.observed,
            bound: r.bound,
            slack: r.slack(),
            equal: u8::from(r.is_equality()),
        }
    }
}

/// Writes `e,k,i,nu,bound,slack,equal` rows with LF line endings.
pub struct CsvSink<W: Write> {
    out: csv::Writer<W>,
}

fn csv_error(e: csv::Error) -> crate::Error {
    crate::Error::Io(e.to_string())
}

impl<W: Write> CsvSink<W> {
    pub fn new(out: W) -> Result<Self> {
        // the header is written by hand so that an empty sweep still has one
        let mut out = csv::WriterBuilder::new()
            .has_headers(false)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        out.write_record(CSV_HEADER.split(',')).map_err(csv_error)?;
        Ok(CsvSink { out })
    }

    pub fn write(&mut self, row: &BoundCheckRow) -> Result<()> {
        self.out.serialize(RowRecord::from(row)).map_err(csv_error)
    }

    pub fn finish(self) -> Result<W> {
        self.out
            .into_inner()
            .map_err(|e| crate::Error::Io(e.error().to_string()))
    }
}

#[derive(Serialize)]
struct Params {
    e_min: u32,
    e_max: u32,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    check: &'a str,
    params: Params,
    engine: &'a str,
    precision: Option<u32>,
    jobs: usize,
    rows_total: u64,
    violations: Vec<RowRecord>,
    equality_cases: Vec<RowRecord>,
    duration_ms: u64,
    artifact_version: &'a str,
}

pub fn report_json(report: &SweepReport) -> Result<String> {
    let json = JsonReport {
        check: report.check.name(),
        params: Params {
            e_min: report.params.e_min,
            e_max: report.params.e_max,
        },
        engine: report.engine.name(),
        precision: report.engine.precision(),
        jobs: report.jobs,
        rows_total: report.rows_total,
        violations: report.violations.iter().map(RowRecord::from).collect(),
        equality_cases: report.equality_cases.iter().map(RowRecord::from).collect(),
        duration_ms: report.duration_ms,
        artifact_version: env!("CARGO_PKG_VERSION"),
    };
    let mut s = serde_json::to_string_pretty(&json).map_err(|e| crate::Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
