//! Deterministic report assembly: one tabular payload rendered as CSV or as
//! the JSON envelope `{config, results[], summary{passed, failed}}`.
//!
//! Floating-point cells go through the shortest round-trip formatting in both
//! formats, so identical computations yield identical bytes.

use halfspec_core::verify::CheckResult;
use serde_json::{Map, Value};

/// One table cell. `Empty` renders as an empty CSV field and is omitted from
/// JSON row objects.
#[derive(Debug, Clone)]
pub enum Cell {
    Empty,
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

fn csv_field(cell: &Cell) -> String {
    let raw = match cell {
        Cell::Empty => return String::new(),
        Cell::Str(s) => s.clone(),
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => format!("{v}"),
        Cell::Bool(v) => v.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

fn json_value(cell: &Cell) -> Option<Value> {
    match cell {
        Cell::Empty => None,
        Cell::Str(s) => Some(Value::String(s.clone())),
        Cell::Int(v) => Some(Value::from(*v)),
        Cell::Float(v) => Some(Value::from(*v)),
        Cell::Bool(v) => Some(Value::Bool(*v)),
    }
}

/// A fixed-header table plus the invariant checks backing the summary.
pub struct Report {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// (suite, check) pairs; `summary.passed/failed` count these.
    pub checks: Vec<(&'static str, CheckResult)>,
}

impl Report {
    pub fn new(header: &'static [&'static str]) -> Self {
        Report {
            header,
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|(_, c)| !c.passed).count()
    }

    pub fn passed(&self) -> usize {
        self.checks.len() - self.failed()
    }

    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(csv_field).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self, config: Value) -> String {
        let results: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, cell) in self.header.iter().zip(row) {
                    if let Some(v) = json_value(cell) {
                        obj.insert((*name).to_string(), v);
                    }
                }
                Value::Object(obj)
            })
            .collect();
        let envelope = serde_json::json!({
            "config": config,
            "results": results,
            "summary": { "passed": self.passed(), "failed": self.failed() },
        });
        let mut text = serde_json::to_string_pretty(&envelope).expect("serialization");
        text.push('\n');
        text
    }

    pub fn render(&self, format: Format, config: Value) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(config),
        }
    }
}

/// Output encoding for a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A machine-readable error payload for JSON mode.
pub fn error_json(config: Value, message: &str) -> String {
    let envelope = serde_json::json!({
        "config": config,
        "error": { "message": message },
        "results": [],
        "summary": { "passed": 0, "failed": 1 },
    });
    let mut text = serde_json::to_string_pretty(&envelope).expect("serialization");
    text.push('\n');
    text
}
