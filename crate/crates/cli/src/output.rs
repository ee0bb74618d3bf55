//! Tables and their CSV/JSON rendering.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde_json::{json, Map, Value};

use crate::config::Format;

pub const SIG_DIGITS: usize = 12;

/// Metadata value attached to a table.
#[derive(Debug, Clone)]
pub enum Meta {
    Num(f64),
    Text(String),
}

impl From<f64> for Meta {
    fn from(x: f64) -> Self {
        Meta::Num(x)
    }
}

impl From<&str> for Meta {
    fn from(s: &str) -> Self {
        Meta::Text(s.to_string())
    }
}

impl From<String> for Meta {
    fn from(s: String) -> Self {
        Meta::Text(s)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub parameters: Vec<(&'static str, Meta)>,
    pub summary: Vec<(&'static str, Meta)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self { command, parameters: vec![], summary: vec![], columns: columns.to_vec(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// `%.12g`: shortest of fixed or exponent notation, trailing zeros dropped.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp < -5 || exp >= SIG_DIGITS as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn meta_text(m: &Meta) -> String {
    match m {
        Meta::Num(x) => fmt_sig(*x),
        Meta::Text(s) => s.clone(),
    }
}

fn json_num(x: f64) -> Value {
    // round through the printed form so both formats carry the same digits
    fmt_sig(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
}

fn meta_json(m: &Meta) -> Value {
    match m {
        Meta::Num(x) => json_num(*x),
        Meta::Text(s) => Value::String(s.clone()),
    }
}

pub fn render_csv(t: &Table) -> String {
    let mut out = format!("# cvent {}\n", t.command);
    for (k, v) in t.parameters.iter().chain(&t.summary) {
        out.push_str(&format!("# {k}: {}\n", meta_text(v)));
    }
    out.push_str(&format!("# {}\n", t.columns.join(",")));
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_sig(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(t: &Table) -> String {
    let obj = |pairs: &[(&'static str, Meta)]| -> Value {
        Value::Object(pairs.iter().map(|(k, v)| (k.to_string(), meta_json(v))).collect::<Map<_, _>>())
    };
    let compact = |v: &Value| serde_json::to_string(v).expect("tables always serialize");
    // one row per line keeps long tables readable and diffable
    let rows: Vec<String> = t
        .rows
        .iter()
        .map(|r| format!("    {}", compact(&Value::Array(r.iter().map(|&x| json_num(x)).collect()))))
        .collect();
    format!(
        "{{\n  \"command\": {},\n  \"parameters\": {},\n  \"summary\": {},\n  \"columns\": {},\n  \"rows\": [\n{}\n  ]\n}}\n",
        compact(&json!(t.command)),
        compact(&obj(&t.parameters)),
        compact(&obj(&t.summary)),
        compact(&json!(t.columns)),
        rows.join(",\n")
    )
}

/// Renders once and writes the whole document in a single call.
pub fn emit(t: &Table, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    let text = match format {
        Format::Csv => render_csv(t),
        Format::Json => render_json(t),
    };
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                // a reader that stops early (`| head`) is not a failure
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.context("writing stdout"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(0.2291000000001234), "0.2291");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(fmt_sig(123456.789), "123456.789");
        assert_eq!(fmt_sig(1e-7 / 3.0), "3.33333333333e-08");
        assert_eq!(fmt_sig(6.02214076e23), "6.02214076e+23");
        assert_eq!(fmt_sig(999999999999.9), "1e+12");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(42.0), "42");
        assert_eq!(fmt_sig(f64::NAN), "nan");
    }

    #[test]
    fn printed_values_round_trip_to_twelve_digits() {
        for x in [0.1234567890123456, 1.5e-9, 987654.3210987, 59.0612345678912] {
            let back: f64 = fmt_sig(x).parse().unwrap();
            assert!((back - x).abs() <= 5e-12 * x.abs(), "{x} -> {back}");
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", &["a", "b"]);
        t.parameters.push(("g0", 4.0.into()));
        t.summary.push(("note", "ok".into()));
        t.push(vec![1.0, 0.5]);
        assert_eq!(render_csv(&t), "# cvent demo\n# g0: 4\n# note: ok\n# a,b\n1,0.5\n");
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new("demo", &["a"]);
        t.push(vec![1.0 / 3.0]);
        t.push(vec![f64::NAN]);
        let v: Value = serde_json::from_str(&render_json(&t)).unwrap();
        assert_eq!(v["columns"][0], "a");
        assert_eq!(v["rows"][0][0].as_f64().unwrap(), 0.333333333333);
        assert!(v["rows"][1][0].is_null());
        let empty: Value = serde_json::from_str(&render_json(&Table::new("demo", &["a"]))).unwrap();
        assert_eq!(empty["rows"].as_array().unwrap().len(), 0);
    }
}
