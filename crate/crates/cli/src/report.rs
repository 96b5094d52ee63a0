//! Tabular command output rendered as Markdown, CSV or JSON.

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Csv,
    Json,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Md => "md",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Value,
}

/// JSON number, or null when not finite.
pub fn num(v: f64) -> Value {
    Value::from(v)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Md => Ok(self.markdown()),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn markdown(&self) -> String {
        let esc = |s: String| s.replace('|', "\\|");
        let mut out = format!("## bej {}\n\n", self.command);
        out += &format!("| {} |\n", self.columns.join(" | "));
        out += &format!("|{}\n", "---|".repeat(self.columns.len()));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| esc(cell(v))).collect();
            out += &format!("| {} |\n", cells.join(" | "));
        }
        if let Value::Object(summary) = &self.summary {
            out.push('\n');
            for (k, v) in summary {
                out += &format!("- {k}: {}\n", cell(v));
            }
        }
        out
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn json(&self) -> Result<String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect::<Map<_, _>>()))
            .collect();
        let doc = serde_json::json!({
            "command": self.command,
            "config": self.config,
            "rows": rows,
            "summary": self.summary,
        });
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }
}
