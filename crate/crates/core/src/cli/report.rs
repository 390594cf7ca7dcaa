//! Report rows and their CSV / JSON forms.
//!
//! CSV header: the input columns in order, then `value_re,value_im,abs_err,converged`.
//! JSON: `{"schema_version", "config", "rows": [{"inputs": {..}, "value": {"re", "im"},
//! "abs_err", "converged"}]}`. Numbers carry 17 significant digits; non-finite
//! numbers are `NaN`/`inf` in CSV and `null` in JSON.

use std::io::Write;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;
use serde_json::Value;

use super::CliError;
use crate::Complex;

pub const SCHEMA_VERSION: u32 = 1;

const TRAILING: [&str; 4] = ["value_re", "value_im", "abs_err", "converged"];

/// One input cell: numeric, or a label such as a check name.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Num(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub inputs: Vec<Input>,
    pub value: Complex,
    pub abs_err: f64,
    pub converged: bool,
}

/// Rows with their input column names.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub input_names: Vec<String>,
    pub rows: Vec<Row>,
}

/// Scientific notation with 17 significant digits.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn raw_number(v: f64) -> Box<RawValue> {
    let text = if v.is_finite() { format_number(v) } else { "null".into() };
    RawValue::from_string(text).expect("formatted number is valid JSON")
}

struct JsonRow<'a> {
    names: &'a [String],
    row: &'a Row,
}

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Inputs<'a>(&'a [String], &'a [Input]);
        impl Serialize for Inputs<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (name, input) in self.0.iter().zip(self.1) {
                    match input {
                        Input::Num(v) => map.serialize_entry(name, &raw_number(*v))?,
                        Input::Text(t) => map.serialize_entry(name, t)?,
                    }
                }
                map.end()
            }
        }
        struct ComplexCell(Complex);
        impl Serialize for ComplexCell {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("re", &raw_number(self.0.re))?;
                map.serialize_entry("im", &raw_number(self.0.im))?;
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("inputs", &Inputs(self.names, &self.row.inputs))?;
        map.serialize_entry("value", &ComplexCell(self.row.value))?;
        map.serialize_entry("abs_err", &raw_number(self.row.abs_err))?;
        map.serialize_entry("converged", &self.row.converged)?;
        map.end()
    }
}

/// Writes `table` as CSV.
pub fn write_csv(table: &Table, out: impl Write) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<&str> = table.input_names.iter().map(String::as_str).chain(TRAILING).collect();
    w.write_record(&header).map_err(io)?;
    for row in &table.rows {
        let mut record: Vec<String> = row
            .inputs
            .iter()
            .map(|i| match i {
                Input::Num(v) => format_number(*v),
                Input::Text(t) => t.clone(),
            })
            .collect();
        record.extend([
            format_number(row.value.re),
            format_number(row.value.im),
            format_number(row.abs_err),
            row.converged.to_string(),
        ]);
        w.write_record(&record).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

/// Writes `table` as JSON with `config` echoed.
pub fn write_json(table: &Table, config: &impl Serialize, mut out: impl Write) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Document<'a, C: Serialize> {
        schema_version: u32,
        config: &'a C,
        rows: Vec<JsonRow<'a>>,
    }
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        config,
        rows: table
            .rows
            .iter()
            .map(|row| JsonRow {
                names: &table.input_names,
                row,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::Io(e.to_string()))
}

fn parse_cell(text: &str) -> Input {
    match text.parse::<f64>() {
        Ok(v) => Input::Num(v),
        Err(_) => Input::Text(text.to_string()),
    }
}

fn bad(what: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("malformed report: {what}"))
}

/// Reads a table written by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Table, CliError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(bad)?.iter().map(String::from).collect();
    let k = header
        .len()
        .checked_sub(TRAILING.len())
        .filter(|&k| header[k..] == TRAILING)
        .ok_or_else(|| bad("header"))?;
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(bad)?;
        let num = |i: usize| record[i].parse::<f64>().map_err(bad);
        rows.push(Row {
            inputs: (0..k).map(|i| parse_cell(&record[i])).collect(),
            value: Complex::new(num(k)?, num(k + 1)?),
            abs_err: num(k + 2)?,
            converged: record[k + 3].parse().map_err(bad)?,
        });
    }
    Ok(Table {
        input_names: header[..k].to_vec(),
        rows,
    })
}

/// Reads the rows of a document written by [`write_json`]. Input names come
/// from the first row, so an empty document has none.
pub fn read_json(text: &str) -> Result<Table, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(bad)?;
    if doc["schema_version"] != SCHEMA_VERSION {
        return Err(bad("schema_version"));
    }
    let num = |v: &Value| match v {
        Value::Null => Ok(f64::NAN),
        v => v.as_f64().ok_or_else(|| bad(v)),
    };
    let mut names = Vec::new();
    let mut rows = Vec::new();
    for row in doc["rows"].as_array().ok_or_else(|| bad("rows"))? {
        let inputs = row["inputs"].as_object().ok_or_else(|| bad("inputs"))?;
        if names.is_empty() {
            names = inputs.keys().cloned().collect();
        }
        rows.push(Row {
            inputs: inputs
                .values()
                .map(|v| match v {
                    Value::String(t) => Ok(Input::Text(t.clone())),
                    v => num(v).map(Input::Num),
                })
                .collect::<Result<_, _>>()?,
            value: Complex::new(num(&row["value"]["re"])?, num(&row["value"]["im"])?),
            abs_err: num(&row["abs_err"])?,
            converged: row["converged"].as_bool().ok_or_else(|| bad("converged"))?,
        });
    }
    Ok(Table {
        input_names: names,
        rows,
    })
}
