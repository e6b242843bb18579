//! Report records: one JSON object per line, CSV with the same columns.

use fermatlab::primality::{FactorWitness, ScanResult, TestReport, Verdict};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

/// Column order of the CSV form, identical to the JSON field order.
pub const COLUMNS: [&str; 16] = [
    "schema_version",
    "command",
    "n",
    "bits",
    "verdict_pepin",
    "verdict_paper",
    "found_q",
    "window_lo",
    "window_hi",
    "squarings_pepin",
    "squarings_scan",
    "factor",
    "cofactor",
    "consistent",
    "elapsed_ms",
    "trace_hash",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRecord {
    pub schema_version: String,
    pub command: String,
    pub n: u32,
    pub bits: u64,
    pub verdict_pepin: Option<String>,
    pub verdict_paper: Option<String>,
    pub found_q: Option<u64>,
    pub window_lo: Option<u64>,
    pub window_hi: Option<u64>,
    pub squarings_pepin: Option<u64>,
    pub squarings_scan: Option<u64>,
    /// Decimal, since factors outgrow every fixed-width integer.
    pub factor: Option<String>,
    pub cofactor: Option<String>,
    pub consistent: Option<bool>,
    pub elapsed_ms: Option<f64>,
    pub trace_hash: Option<String>,
}

impl ReportRecord {
    pub fn new(command: &str, n: u32) -> Self {
        ReportRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            n,
            bits: bits_of(n),
            verdict_pepin: None,
            verdict_paper: None,
            found_q: None,
            window_lo: None,
            window_hi: None,
            squarings_pepin: None,
            squarings_scan: None,
            factor: None,
            cofactor: None,
            consistent: None,
            elapsed_ms: None,
            trace_hash: None,
        }
    }

    pub fn with_pepin(mut self, verdict: &Verdict, squarings: u64) -> Self {
        self.verdict_pepin = Some(verdict.label().to_string());
        self.squarings_pepin = Some(squarings);
        self
    }

    pub fn with_scan(mut self, scan: &ScanResult) -> Self {
        self.verdict_paper = Some(scan.verdict().label().to_string());
        self.found_q = scan.found_q;
        self.window_lo = Some(scan.window.lo);
        self.window_hi = Some(scan.window.hi);
        self.squarings_scan = Some(scan.squarings);
        self.trace_hash = Some(scan.residue_trace_hash.clone());
        self
    }

    pub fn with_factor(mut self, witness: Option<&FactorWitness>) -> Self {
        if let Some(w) = witness {
            self.factor = Some(w.factor.to_string());
            self.cofactor = Some(w.cofactor.to_string());
        }
        self
    }

    pub fn from_test_report(command: &str, report: &TestReport) -> Self {
        let mut record = ReportRecord::new(command, report.n)
            .with_pepin(&report.pepin, report.squarings_pepin)
            .with_scan(&report.scan);
        record.consistent = Some(report.consistent);
        record.elapsed_ms = Some(round_ms(report.elapsed_ms_pepin + report.elapsed_ms_scan));
        record
    }

    /// Same record with the wall-clock field cleared.
    pub fn without_timing(&self) -> Self {
        ReportRecord {
            elapsed_ms: None,
            ..self.clone()
        }
    }
}

/// Microsecond resolution is plenty for wall times.
pub fn round_ms(ms: f64) -> f64 {
    (ms * 1e3).round() / 1e3
}

/// `2^n`, saturating.
pub fn bits_of(n: u32) -> u64 {
    1u64.checked_shl(n).unwrap_or(u64::MAX)
}

pub fn to_json_line<T: Serialize>(record: &T) -> String {
    serde_json::to_string(record).expect("records serialize")
}

pub fn to_csv<T: Serialize>(records: &[T]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for r in records {
        writer.serialize(r).expect("records serialize");
    }
    String::from_utf8(writer.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

pub fn from_json_lines(text: &str) -> serde_json::Result<Vec<ReportRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

pub fn from_csv(text: &str) -> csv::Result<Vec<ReportRecord>> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}
