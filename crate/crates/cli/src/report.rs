//! Tabular experiment reports with CSV and JSON renderings.

use serde_json::{Map, Value as Json};

use crate::config::OutputFormat;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Value::Num(v) => fmt_f64(*v),
            Value::Int(v) => v.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Num(v) if v.is_finite() => serde_json::Number::from_f64(*v).map(Json::Number).unwrap_or(Json::Null),
            Value::Num(v) => Json::String(fmt_f64(*v)),
            Value::Int(v) => Json::from(*v),
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
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

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub experiment: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
}

impl Report {
    pub fn new(experiment: &str, meta: Vec<(String, String)>, columns: &[&str]) -> Report {
        Report {
            experiment: experiment.to_string(),
            meta,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: vec![],
            summary: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        let v = v.into();
        match self.summary.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = v,
            None => self.summary.push((key.to_string(), v)),
        }
    }

    pub fn summary(&self, key: &str) -> Option<&Value> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn num(&self, key: &str) -> f64 {
        self.summary(key).and_then(Value::as_f64).unwrap_or(f64::NAN)
    }

    pub fn flag(&self, key: &str) -> bool {
        self.summary(key).and_then(Value::as_bool).unwrap_or(false)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column, in row order.
    pub fn column_values(&self, name: &str) -> Vec<f64> {
        match self.column(name) {
            Some(i) => self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect(),
            None => vec![],
        }
    }

    /// RFC 4180 table preceded by `# key = value` lines for the config echo and
    /// followed by `# summary ...` lines.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = format!("# experiment = {}\n", self.experiment);
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(vec![]);
        w.write_record(&self.columns).map_err(|e| CliError::Io(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::render)).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let body = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| CliError::Io(e.to_string()))?);
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary {k} = {}\n", v.render()));
        }
        Ok(out)
    }

    /// One object `{meta, rows, summary}`.
    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        meta.insert("experiment".into(), Json::String(self.experiment.clone()));
        for (k, v) in &self.meta {
            meta.insert(k.clone(), Json::String(v.clone()));
        }
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| Json::Object(self.columns.iter().cloned().zip(r.iter().map(Value::json)).collect()))
            .collect();
        let summary: Map<String, Json> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let mut top = Map::new();
        top.insert("meta".into(), Json::Object(meta));
        top.insert("rows".into(), Json::Array(rows));
        top.insert("summary".into(), Json::Object(summary));
        let mut s = serde_json::to_string_pretty(&Json::Object(top)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => Ok(self.to_json()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", vec![("seed".into(), "7".into())], &["n", "value"]);
        r.push(vec![1usize.into(), 0.5.into()]);
        r.push(vec![2usize.into(), f64::INFINITY.into()]);
        r.set("stable", true);
        r
    }

    #[test]
    fn csv_layout() {
        let s = sample().to_csv().unwrap();
        assert!(s.starts_with("# experiment = demo\n# seed = 7\nn,value\r\n1,5e-1\r\n2,inf\r\n"));
        assert!(s.ends_with("# summary stable = true\n"));
    }

    #[test]
    fn json_layout() {
        let v: Json = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["meta"]["seed"], "7");
        assert_eq!(v["rows"][0]["value"], 0.5);
        assert_eq!(v["rows"][1]["value"], "inf");
        assert_eq!(v["summary"]["stable"], true);
    }
}
