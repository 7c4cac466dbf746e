//! Rendering command results as JSON, CSV or plain text.

use std::fs::File;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::{Cli, Format};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    /// Nothing was checked.
    Info,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass | Status::Info => 0,
            Status::Fail | Status::Inconclusive => 1,
        }
    }

    /// Worst of two statuses; failure dominates inconclusive.
    pub fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (Pass, _) | (_, Pass) => Pass,
            _ => Info,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// The result of one command in every output format.
pub struct Output {
    pub command: &'static str,
    pub status: Status,
    /// One JSON value per record; streamed commands print one per line.
    pub records: Vec<Value>,
    pub stream: bool,
    pub table: Table,
    pub pretty: String,
}

fn timestamp() -> u64 {
    std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn envelope(command: &str, status: Status, with_time: bool) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("status".into(), json!(status));
    if with_time {
        m.insert("generated_unix".into(), json!(timestamp()));
    }
    m
}

impl Output {
    fn render(&self, cli: &Cli) -> Result<Vec<u8>> {
        let with_time = !cli.no_timestamp;
        let mut buf = Vec::new();
        match cli.format {
            Format::Json if self.stream => {
                for r in &self.records {
                    let mut m = envelope(self.command, self.status, with_time);
                    m.insert("result".into(), r.clone());
                    serde_json::to_writer(&mut buf, &Value::Object(m)).map_err(io_err)?;
                    buf.push(b'\n');
                }
            }
            Format::Json => {
                let mut m = envelope(self.command, self.status, with_time);
                let result = match self.records.as_slice() {
                    [one] => one.clone(),
                    many => Value::Array(many.to_vec()),
                };
                m.insert("result".into(), result);
                serde_json::to_writer_pretty(&mut buf, &Value::Object(m)).map_err(io_err)?;
                buf.push(b'\n');
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut buf);
                w.write_record(&self.table.header).map_err(csv_err)?;
                for row in &self.table.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                w.flush()?;
            }
            Format::Pretty => {
                buf.extend_from_slice(self.pretty.as_bytes());
                if !self.pretty.ends_with('\n') {
                    buf.push(b'\n');
                }
            }
        }
        Ok(buf)
    }

    pub fn write(&self, cli: &Cli) -> Result<()> {
        let bytes = self.render(cli)?;
        match &cli.output {
            Some(path) => File::create(path)?.write_all(&bytes)?,
            None => io::stdout().lock().write_all(&bytes)?,
        }
        Ok(())
    }
}

fn io_err(e: serde_json::Error) -> Error {
    Error::Io(e.to_string())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Fixed-point decimal with the given number of digits.
pub fn decimal(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    // Avoid "-0.000".
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Left-aligned text grid.
pub fn grid(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len().max(rows.iter().map(Vec::len).max().unwrap_or(0));
    let mut width = vec![0usize; cols];
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (i, c) in r.iter().enumerate() {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let cells: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = width[i])).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(decimal(-1e-20, 3), "0.000");
        assert_eq!(decimal(-1.5, 2), "-1.50");
    }

    #[test]
    fn status_combination() {
        assert_eq!(Status::Pass.and(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Inconclusive.and(Status::Fail), Status::Fail);
        assert_eq!(Status::Info.and(Status::Info), Status::Info);
        assert_eq!(Status::Info.and(Status::Pass), Status::Pass);
    }
}
