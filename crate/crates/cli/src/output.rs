use std::io::{self, Write};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA: &str = "vmv/1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Plain text for reading at a terminal.
    #[default]
    Text,
    Csv,
    Json,
}

/// A real number with 17 significant digits.
pub fn real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// What a command produced, in every output format.
#[derive(Debug, Default)]
pub struct Report {
    pub command: String,
    /// Text form; when empty the table is printed instead.
    pub text: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub data: Value,
    /// Names of checks that failed.
    pub failures: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            data: Value::Null,
            ..Self::default()
        }
    }

    pub fn header(mut self, cols: &[&str]) -> Self {
        self.header = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run metadata carried into the output.
#[derive(Debug, Clone, Default)]
pub struct Meta {
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch, only when a timestamp was requested.
    pub timestamp: Option<u64>,
}

/// JSON formatter that writes every float with 17 significant digits.
struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{}", real(v))
    }
}

pub fn render(report: &Report, format: Format, meta: &Meta) -> io::Result<Vec<u8>> {
    let mut out = Vec::new();
    match format {
        Format::Text => {
            if let Some(ts) = meta.timestamp {
                writeln!(out, "# generated {ts}")?;
            }
            if report.text.is_empty() {
                writeln!(out, "{}", report.header.join("\t"))?;
                for r in &report.rows {
                    writeln!(out, "{}", r.join("\t"))?;
                }
            } else {
                writeln!(out, "{}", report.text.trim_end())?;
            }
        }
        Format::Csv => {
            if let Some(ts) = meta.timestamp {
                writeln!(out, "# generated {ts}")?;
            }
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&report.header)?;
            for r in &report.rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut doc = json!({
                "schema": SCHEMA,
                "command": report.command,
                "ok": report.passed(),
                "data": report.data,
            });
            if let Some(seed) = meta.seed {
                doc["seed"] = json!(seed);
            }
            if let Some(ts) = meta.timestamp {
                doc["generated"] = json!(ts);
            }
            let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17);
            doc.serialize(&mut ser)?;
            out.push(b'\n');
        }
    }
    Ok(out)
}
