//! CSV and JSON reports.
//!
//! `<out>/<subcommand>.csv` starts with one `# generated ...` comment line
//! followed by a `check,anchor,value,threshold,status` table. The JSON summary
//! carries the same rows without the timestamp, so repeated runs with the
//! same seed produce identical JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Radiating,
    NonRadiating,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Radiating => "radiating",
            Status::NonRadiating => "non-radiating",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub check: String,
    pub anchor: String,
    pub value: f64,
    pub threshold: f64,
    pub status: Status,
}

/// `(level, h, error, order)` row of a convergence study.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub level: u32,
    pub h: f64,
    pub error: f64,
    pub order: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub subcommand: String,
    pub scenario: Option<String>,
    pub seed: u64,
    pub rows: Vec<Row>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub convergence: Vec<ConvergenceRow>,
    pub failed: usize,
}

impl Report {
    pub fn new(subcommand: &str, scenario: Option<String>, seed: u64) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            scenario,
            seed,
            rows: Vec::new(),
            warnings: Vec::new(),
            convergence: Vec::new(),
            failed: 0,
        }
    }

    /// Adds a check that passes when `value <= threshold`.
    pub fn at_most(&mut self, check: impl Into<String>, anchor: &str, value: f64, threshold: f64) {
        self.push(check, anchor, value, threshold, Status::from_bool(value <= threshold));
    }

    /// Adds a check that passes when `value >= threshold`.
    pub fn at_least(&mut self, check: impl Into<String>, anchor: &str, value: f64, threshold: f64) {
        self.push(check, anchor, value, threshold, Status::from_bool(value >= threshold));
    }

    pub fn push(&mut self, check: impl Into<String>, anchor: &str, value: f64, threshold: f64, status: Status) {
        if status == Status::Fail {
            self.failed += 1;
        }
        self.rows.push(Row { check: check.into(), anchor: anchor.to_string(), value, threshold, status });
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn write(&self, dir: &Path, timestamp: &str) -> Result<Vec<PathBuf>, RunError> {
        fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.subcommand));
        let mut file = fs::File::create(&csv_path)?;
        writeln!(file, "# generated {timestamp} seed={}", self.seed)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["check", "anchor", "value", "threshold", "status"])?;
        for row in &self.rows {
            w.write_record([
                row.check.as_str(),
                row.anchor.as_str(),
                &format!("{:e}", row.value),
                &format!("{:e}", row.threshold),
                row.status.label(),
            ])?;
        }
        w.flush()?;
        let mut written = vec![csv_path];

        if !self.convergence.is_empty() {
            let path = dir.join(format!("{}_table.csv", self.subcommand));
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(["level", "h", "error", "order"])?;
            for r in &self.convergence {
                let order = r.order.map(|p| format!("{p:.4}")).unwrap_or_default();
                w.write_record([r.level.to_string(), format!("{:e}", r.h), format!("{:e}", r.error), order])?;
            }
            w.flush()?;
            written.push(path);
        }

        let json_path = dir.join(format!("{}.json", self.subcommand));
        let json = serde_json::to_string_pretty(self).map_err(|e| RunError::Io(e.into()))?;
        fs::write(&json_path, json + "\n")?;
        written.push(json_path);
        Ok(written)
    }

    pub fn print_summary(&self) {
        for row in &self.rows {
            println!(
                "{:<14} {} [{}]: {:.3e} (threshold {:.3e})",
                row.status.label(),
                row.check,
                row.anchor,
                row.value,
                row.threshold
            );
        }
        for w in &self.warnings {
            eprintln!("warning: {w}");
        }
        println!("{}: {} of {} checks pass", self.subcommand, self.rows.len() - self.failed, self.rows.len());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_failures() {
        let mut r = Report::new("demo", None, 0);
        r.at_most("small", "anchor", 1e-4, 1e-3);
        r.at_most("large", "anchor", 1e-2, 1e-3);
        r.at_least("order", "anchor", 2.0, 1.7);
        r.push("field", "anchor", 12.0, 10.0, Status::Radiating);
        assert_eq!(r.failed, 1);
    }

    #[test]
    fn writes_csv_and_json() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = Report::new("demo", Some("s".into()), 4);
        r.at_most("small", "anchor", 1e-4, 1e-3);
        r.convergence.push(ConvergenceRow { level: 2, h: 0.1, error: 1e-3, order: None });
        let paths = r.write(dir.path(), "2026-01-01T00:00:00Z").unwrap();
        assert_eq!(paths.len(), 3);
        let csv = fs::read_to_string(&paths[0]).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# generated 2026-01-01T00:00:00Z seed=4"));
        assert_eq!(lines.next(), Some("check,anchor,value,threshold,status"));
        assert!(lines.next().unwrap().ends_with(",pass"));
        let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&paths[2]).unwrap()).unwrap();
        assert_eq!(json["failed"], 0);
        assert_eq!(json["rows"][0]["status"], "pass");
    }
}
