//! CSV and JSON writers. Reals carry 17 significant digits.

use serde_json::{Map, Number, Value};

use super::config::{ExperimentConfig, Format};

/// One output value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => fmt_real(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Real(x) if x.is_finite() => Value::Number(
                fmt_real(*x)
                    .parse::<Number>()
                    .expect("formatted real is valid JSON"),
            ),
            Cell::Real(_) => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// `{:.16e}`, i.e. 17 significant digits; non-finite values print as
/// `nan`, `inf`, `-inf`.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// A command's result: a table plus a summary block.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
}

impl Report {
    pub fn new(command: impl Into<String>, columns: Vec<&'static str>) -> Self {
        Report {
            command: command.into(),
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    /// Header, rows, then (if any) a blank line and a `metric,value` block.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        if !self.summary.is_empty() {
            out.push_str("\nmetric,value\n");
            for (k, v) in &self.summary {
                out.push_str(&format!("{k},{}\n", v.csv()));
            }
        }
        out
    }

    /// `{"command", "config", "rows": [{column: value}], "summary": {…}}`.
    pub fn to_json(&self, config: &ExperimentConfig) -> String {
        let cfg: Map<String, Value> = config
            .entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), Value::String(v)))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let summary: Map<String, Value> = self
            .summary
            .iter()
            .map(|(k, v)| (k.to_string(), v.json()))
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(self.command.clone()));
        doc.insert("config".into(), Value::Object(cfg));
        doc.insert("rows".into(), Value::Array(rows));
        doc.insert("summary".into(), Value::Object(summary));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc))
            .expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, config: &ExperimentConfig) -> String {
        match config.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(config),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_real(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_real(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_real(f64::NAN), "nan");
        let back: f64 = fmt_real(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn json_keeps_digits_and_nulls_nonfinite() {
        let mut r = Report::new("x", vec!["a", "b"]);
        r.push(vec![Cell::Real(0.1), Cell::Real(f64::INFINITY)]);
        let s = r.to_json(&ExperimentConfig::default());
        assert!(s.contains("\"a\": 1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"b\": null"));
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new("x", vec!["t", "v"]);
        r.push(vec![1usize.into(), 0.5.into()]);
        r.note("ok", true);
        assert_eq!(
            r.to_csv(),
            "t,v\n1,5.0000000000000000e-1\n\nmetric,value\nok,true\n"
        );
    }
}
