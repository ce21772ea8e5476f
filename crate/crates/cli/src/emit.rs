//! Output emission: CSV (header row, 12 significant digits, trailing
//! `# key = value` metadata comments) or a single JSON document carrying
//! the echoed config for round-tripping.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;

/// One subcommand's tabular result.
#[derive(Clone, Debug, Serialize)]
pub struct Document {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub meta: BTreeMap<String, f64>,
}

impl Document {
    pub fn new(command: &str, config: Option<&RunConfig>, columns: &[&str]) -> Self {
        Document {
            command: command.to_string(),
            config: config.cloned(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            meta: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// 12 significant digits, '.' decimal, no locale.
    fn fmt(v: f64) -> String {
        format!("{v:.11e}")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| Self::fmt(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k} = {}\n", Self::fmt(*v)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn emit(&self, json: bool, out: Option<&Path>) -> std::io::Result<()> {
        let text = if json { self.to_json() } else { self.to_csv() };
        match out {
            Some(path) => std::fs::write(path, text),
            None => {
                let stdout = std::io::stdout();
                let mut h = stdout.lock();
                h.write_all(text.as_bytes())
            }
        }
    }
}
