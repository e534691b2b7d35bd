use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use toml::{Table, Value};

use crate::job::{Command, JobSpec};
use crate::CliError;

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, Serialize)]
struct Versions {
    logpot: &'static str,
    report_format: i64,
}

/// Everything except `timestamp` is a function of the job alone.
#[derive(Debug, Serialize)]
struct Report<'a> {
    command: Command,
    timestamp: u64,
    versions: Versions,
    inputs: &'a JobSpec,
    results: &'a Table,
}

/// Builder for the `results` table.
#[derive(Debug, Default)]
pub struct Results(pub Table);

impl Results {
    pub fn float(&mut self, key: &str, v: f64) -> &mut Self {
        self.0.insert(key.into(), Value::Float(v));
        self
    }

    pub fn int(&mut self, key: &str, v: usize) -> &mut Self {
        self.0.insert(key.into(), Value::Integer(v as i64));
        self
    }

    pub fn floats(&mut self, key: &str, v: &[f64]) -> &mut Self {
        self.0.insert(key.into(), Value::Array(v.iter().map(|&x| Value::Float(x)).collect()));
        self
    }

    pub fn ints(&mut self, key: &str, v: &[u64]) -> &mut Self {
        self.0.insert(key.into(), Value::Array(v.iter().map(|&x| Value::Integer(x as i64)).collect()));
        self
    }

    pub fn table(&mut self, key: &str, t: Results) -> &mut Self {
        self.0.insert(key.into(), Value::Table(t.0));
        self
    }

    pub fn tables(&mut self, key: &str, ts: Vec<Results>) -> &mut Self {
        self.0.insert(key.into(), Value::Array(ts.into_iter().map(|t| Value::Table(t.0)).collect()));
        self
    }
}

pub fn write_report(dir: &Path, command: Command, job: &JobSpec, results: &Results) -> Result<(), CliError> {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let report = Report {
        command,
        timestamp,
        versions: Versions {
            logpot: env!("CARGO_PKG_VERSION"),
            report_format: FORMAT_VERSION,
        },
        inputs: job,
        results: &results.0,
    };
    let text = toml::to_string(&report).map_err(|e| CliError::Other(format!("cannot encode report: {e}")))?;
    fs::write(dir.join("report.toml"), text)?;
    Ok(())
}

/// CSV with a header row and every value printed with 17 significant digits.
pub fn write_csv(dir: &Path, name: &str, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<(), CliError> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    fs::write(dir.join(name), out)?;
    Ok(())
}
