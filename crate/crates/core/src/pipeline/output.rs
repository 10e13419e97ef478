//! Serialization of verification reports.

use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::VerifyReport;
use crate::{Error, Result};

/// Report encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// One JSON object per branch and line.
    Jsonl,
    /// One summary row per branch.
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" | "jsonl" => Ok(OutputFormat::Jsonl),
            "csv" => Ok(OutputFormat::Csv),
            "text" | "txt" => Ok(OutputFormat::Text),
            other => Err(Error::InvalidInput(format!("unknown format {other}"))),
        }
    }
}

pub const CSV_HEADER: [&str; 10] =
    ["k", "nu", "sign", "lambda", "c", "verdict", "rounds", "m_bound", "residual", "irregular"];

fn verdict_name(report: &VerifyReport) -> String {
    serde_json::to_value(report.verdict).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(T::to_string).unwrap_or_default()
}

/// Writes the reports in order.
pub fn write_reports<W: Write>(reports: &[VerifyReport], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Jsonl => {
            let mut out = out;
            for r in reports {
                let line = serde_json::to_string(r).map_err(|e| Error::Serialization(e.to_string()))?;
                writeln!(out, "{line}")?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let csv_err = |e: csv::Error| match e.into_kind() {
                csv::ErrorKind::Io(io) => Error::Io(io),
                other => Error::Serialization(format!("{other:?}")),
            };
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for r in reports {
                let irregular = r.residual.iter().filter(|s| !s.acceptable()).count()
                    + r.extensions.iter().filter(|e| !e.regular).count();
                w.write_record([
                    r.k.to_string(),
                    r.nu.to_string(),
                    r.sign.to_string(),
                    opt(&r.lambda),
                    opt(&r.c),
                    verdict_name(r),
                    r.rounds.to_string(),
                    opt(&r.m_bound),
                    r.residual.len().to_string(),
                    irregular.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Text => {
            let mut out = out;
            for r in reports {
                let lambda = r.lambda.map_or("*".to_string(), |l| format!("{l:+}"));
                writeln!(out, "k={} nu={} sign={} lambda={lambda}: {}", r.k, r.nu, r.sign, verdict_name(r))?;
                for step in &r.trail {
                    let mark = if step.passed { "ok" } else { "FAILED" };
                    writeln!(out, "  [{mark}] {}: {}", step.step, step.detail)?;
                }
                for note in &r.notes {
                    writeln!(out, "  note: {note}")?;
                }
            }
        }
    }
    Ok(())
}
