//! Result records: CSV or JSON with 12 significant digits.

use crate::args::Format;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

/// What a command produced: table rows, a structured document, or raw text.
pub enum Output {
    Rows(Vec<Value>),
    Doc(Value),
    Text(String),
}

impl Output {
    pub fn rows<T: serde::Serialize>(rows: impl IntoIterator<Item = T>) -> Output {
        Output::Rows(
            rows.into_iter()
                .map(|r| serde_json::to_value(r).expect("serialisable row"))
                .collect(),
        )
    }

    pub fn doc<T: serde::Serialize>(doc: &T) -> Output {
        Output::Doc(serde_json::to_value(doc).expect("serialisable document"))
    }

    pub fn default_format(&self) -> Format {
        match self {
            Output::Rows(_) | Output::Text(_) => Format::Csv,
            Output::Doc(_) => Format::Json,
        }
    }
}

/// `%.12g`: 12 significant digits, trailing zeros removed.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-5..12).contains(&exp) {
        format!("{}e{exp}", trim(mantissa))
    } else {
        trim(&format!("{x:.prec$}", prec = (11 - exp) as usize))
    }
}

/// Rounds every float to 12 significant digits.
pub fn round(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            fmt_g(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round(v))).collect()),
        other => other,
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => fmt_g(n.as_f64().unwrap()),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => round(other.clone()).to_string(),
    }
}

fn flatten_rows(out: &Output) -> Vec<Map<String, Value>> {
    let as_map = |v: &Value| match v {
        Value::Object(m) => m.clone(),
        other => Map::from_iter([("value".to_string(), other.clone())]),
    };
    match out {
        Output::Rows(rows) => rows.iter().map(as_map).collect(),
        Output::Doc(doc) => vec![as_map(doc)],
        Output::Text(_) => Vec::new(),
    }
}

fn to_csv(out: &Output) -> String {
    let rows = flatten_rows(out);
    let mut columns: Vec<String> = Vec::new();
    for r in &rows {
        for k in r.keys() {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns).expect("in-memory write");
    for r in &rows {
        w.write_record(
            columns
                .iter()
                .map(|c| r.get(c).map(cell).unwrap_or_default()),
        )
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

pub fn config_hash(command: &Value) -> String {
    let digest = Sha256::digest(command.to_string().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// The full record as text. CSV carries the command and hash as a leading
/// `#` line and the wall time as a trailing one.
pub fn render(out: &Output, format: Format, command: &str, hash: &str, wall: f64) -> String {
    if let Output::Text(t) = out {
        return t.clone();
    }
    match format {
        Format::Csv => format!(
            "# kappa {command} config_hash={hash}\n{}# wall_time_s={}\n",
            to_csv(out),
            fmt_g(wall)
        ),
        Format::Json => {
            let result = match out {
                Output::Rows(rows) => Value::Array(rows.clone()),
                Output::Doc(d) => d.clone(),
                Output::Text(_) => unreachable!(),
            };
            let record = serde_json::json!({
                "command": command,
                "config_hash": hash,
                "result": round(result),
                "wall_time_s": round(serde_json::json!(wall)),
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&record).expect("serialisable record")
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_g(0.125), "0.125");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        assert_eq!(fmt_g(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_g(4.0), "4");
        assert_eq!(fmt_g(-0.5), "-0.5");
    }

    #[test]
    fn csv_union_of_columns() {
        let out = Output::Rows(vec![
            serde_json::json!({"a": 1, "b": 0.5}),
            serde_json::json!({"a": 2, "c": true}),
        ]);
        assert_eq!(to_csv(&out), "a,b,c\n1,0.5,\n2,,true\n");
    }
}
