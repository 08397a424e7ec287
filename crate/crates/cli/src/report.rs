//! Output documents: ordered key/value reports and CSV tables.
//!
//! Floats are written in the shortest form that parses back to the same
//! `f64`, so output is byte-stable for a given input.

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    #[default]
    Kv,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Entry {
    Num(f64),
    Text(String),
    Flag(bool),
}

impl Entry {
    fn json(&self) -> Value {
        match self {
            Entry::Num(x) => Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            Entry::Text(s) => Value::String(s.clone()),
            Entry::Flag(b) => Value::Bool(*b),
        }
    }

    fn csv(&self) -> String {
        match self {
            Entry::Num(x) => format_float(*x),
            Entry::Text(s) => quote(s),
            Entry::Flag(b) => b.to_string(),
        }
    }
}

/// Shortest round-trip decimal; `NaN`, `inf`, `-inf` for non-finite values.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Flat, insertion-ordered key/value document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Entry)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.entries.push((key.into(), Entry::Num(value)));
        self
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), Entry::Text(value.into())));
        self
    }

    pub fn flag(&mut self, key: impl Into<String>, value: bool) -> &mut Self {
        self.entries.push((key.into(), Entry::Flag(value)));
        self
    }

    /// Angle in both radians and degrees, as `{key}_rad` and `{key}_deg`.
    pub fn angle(&mut self, key: &str, rad: f64) -> &mut Self {
        self.num(format!("{key}_rad"), rad).num(format!("{key}_deg"), rad.to_degrees())
    }

    /// Power ratio in linear units and in dB.
    pub fn ratio(&mut self, key: &str, linear: f64) -> &mut Self {
        self.num(key, linear).num(format!("{key}_db"), db(linear))
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn get_num(&self, key: &str) -> Option<f64> {
        match self.get(key) {
            Some(Entry::Num(x)) => Some(*x),
            _ => None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Kv => {
                let map: Map<String, Value> = self.entries.iter().map(|(k, v)| (k.clone(), v.json())).collect();
                let mut out = serde_json::to_string_pretty(&Value::Object(map)).expect("plain values serialize");
                out.push('\n');
                out
            }
            Format::Csv => {
                let mut out = String::from("key,value\n");
                for (k, v) in &self.entries {
                    out.push_str(&quote(k));
                    out.push(',');
                    out.push_str(&v.csv());
                    out.push('\n');
                }
                out
            }
        }
    }
}

/// Scan result: named columns, one row per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.iter().map(|c| quote(c)).collect::<Vec<_>>().join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            Format::Kv => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, x)| (c.clone(), Entry::Num(*x).json()))
                            .collect();
                        Value::Object(map)
                    })
                    .collect();
                let mut out = serde_json::to_string_pretty(&Value::Array(rows)).expect("plain values serialize");
                out.push('\n');
                out
            }
        }
    }
}
