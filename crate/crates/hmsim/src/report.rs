//! Tabular reports written as CSV or JSON.

use std::io::Write;

use serde_json::{Map, Value as Json};

/// A report cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Empty,
    Bool(bool),
    Int(u64),
    Float(f64),
    Text(String),
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v.into())
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Empty, Into::into)
    }
}

/// Floats with 17 significant digits; non-finite values by name.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

impl Value {
    pub fn to_csv_field(&self) -> String {
        match self {
            Value::Empty => String::new(),
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Float(x) => format_float(*x),
            Value::Text(s) => s.clone(),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Empty => Json::Null,
            Value::Bool(b) => Json::Bool(*b),
            Value::Int(i) => Json::from(*i),
            Value::Float(x) if x.is_finite() => Json::from(*x),
            Value::Float(x) => Json::String(format_float(*x)),
            Value::Text(s) => Json::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Rows under fixed columns, one report per command run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Self {
            command: command.to_string(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// The column `name` of every row.
    pub fn column(&self, name: &str) -> Option<Vec<&Value>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    /// CSV with a header row. A timestamp goes on a leading `#` line.
    pub fn write_csv<W: Write>(&self, out: W, generated_at: Option<&str>) -> std::io::Result<()> {
        let mut out = out;
        if let Some(ts) = generated_at {
            writeln!(out, "# generated_at={ts}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::to_csv_field))?;
        }
        w.flush()
    }

    pub fn to_json(&self, generated_at: Option<&str>) -> Json {
        let mut doc = Map::new();
        doc.insert("command".into(), Json::String(self.command.clone()));
        if let Some(ts) = generated_at {
            doc.insert("generated_at".into(), Json::String(ts.into()));
        }
        doc.insert("columns".into(), Json::from(self.columns.clone()));
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.to_json()))
                    .collect();
                Json::Object(obj)
            })
            .collect();
        doc.insert("rows".into(), Json::Array(rows));
        Json::Object(doc)
    }

    pub fn write<W: Write>(&self, mut out: W, format: Format, generated_at: Option<&str>) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out, generated_at),
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json(generated_at))?;
                writeln!(out)
            }
        }
    }
}
