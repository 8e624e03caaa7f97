//! Record rendering for the csv and json output formats.
//!
//! A record keeps its fields in header order. CSV prints one header line
//! followed by one line per record; JSON prints one object per line with
//! the same keys.

use std::io::{self, Write};

use asianvol::benchmark::round_half_even;
use serde_json::{Map, Value};

use crate::Format;

#[derive(Debug, Clone)]
pub struct Record {
    fields: Vec<(&'static str, String, Value)>,
}

impl Record {
    pub fn new(headers: &[&'static str]) -> Self {
        Record {
            fields: headers.iter().map(|h| (*h, String::new(), Value::Null)).collect(),
        }
    }

    fn slot(&mut self, key: &str) -> &mut (&'static str, String, Value) {
        self.fields
            .iter_mut()
            .find(|f| f.0 == key)
            .unwrap_or_else(|| panic!("unknown field {key}"))
    }

    pub fn set(&mut self, key: &str, value: Value) {
        let text = match &value {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let slot = self.slot(key);
        slot.1 = text;
        slot.2 = value;
    }

    /// Fixed-point field rounded half-even to `decimals` places.
    pub fn set_fixed(&mut self, key: &str, value: f64, decimals: usize) {
        // Adding 0.0 turns a rounded -0.0 into 0.0.
        let rounded = round_half_even(value, decimals as i32) + 0.0;
        let text = format!("{rounded:.decimals$}");
        let json = text.parse::<f64>().map(Value::from).unwrap_or(Value::Null);
        let slot = self.slot(key);
        slot.1 = text;
        slot.2 = json;
    }

    /// Prices print with six decimals.
    pub fn set_price(&mut self, key: &str, value: f64) {
        self.set_fixed(key, value, 6);
    }

    fn header(&self) -> String {
        self.fields.iter().map(|f| f.0).collect::<Vec<_>>().join(",")
    }

    fn csv_line(&self) -> String {
        self.fields.iter().map(|f| f.1.as_str()).collect::<Vec<_>>().join(",")
    }

    fn json_line(&self) -> String {
        let map: Map<String, Value> = self.fields.iter().map(|f| (f.0.to_string(), f.2.clone())).collect();
        Value::Object(map).to_string()
    }
}

pub fn write_records(out: &mut impl Write, format: Format, records: &[Record]) -> io::Result<()> {
    match format {
        Format::Csv => {
            if let Some(first) = records.first() {
                writeln!(out, "{}", first.header())?;
            }
            for r in records {
                writeln!(out, "{}", r.csv_line())?;
            }
        }
        Format::Json => {
            for r in records {
                writeln!(out, "{}", r.json_line())?;
            }
        }
    }
    Ok(())
}
