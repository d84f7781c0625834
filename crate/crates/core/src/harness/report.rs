//! Writing evaluation reports to disk.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::harness::eval::EvalReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

/// An I/O failure, tagged with the path involved.
#[derive(Debug, Error)]
#[error("{}: {source}", path.display())]
pub struct IoError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

impl IoError {
    pub fn new(path: &Path, source: io::Error) -> Self {
        Self { path: path.to_path_buf(), source }
    }
}

pub fn report_json(report: &EvalReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports always serialize");
    text.push('\n');
    text
}

/// One `episode,return,length` row per episode, then `#` summary lines.
pub fn report_csv(report: &EvalReport) -> String {
    let mut out = String::from("episode,return,length\n");
    for (i, (ret, len)) in report.returns.iter().zip(&report.episode_lengths).enumerate() {
        writeln!(out, "{i},{ret},{len}").unwrap();
    }
    writeln!(out, "# game={} agent={} seed={} config={}", report.game, report.agent, report.seed, report.config)
        .unwrap();
    writeln!(out, "# mean_return={:?} std_return={:?}", report.mean_return, report.std_return).unwrap();
    let events: Vec<String> = report.event_totals.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(out, "# events {}", events.join(" ")).unwrap();
    out
}

pub fn write_report(report: &EvalReport, format: ReportFormat, path: &Path) -> Result<(), IoError> {
    let text = match format {
        ReportFormat::Json => report_json(report),
        ReportFormat::Csv => report_csv(report),
    };
    fs::write(path, text).map_err(|e| IoError::new(path, e))
}

pub fn read_report_json(path: &Path) -> Result<EvalReport, IoError> {
    let text = fs::read_to_string(path).map_err(|e| IoError::new(path, e))?;
    serde_json::from_str(&text).map_err(|e| IoError::new(path, io::Error::new(io::ErrorKind::InvalidData, e)))
}
