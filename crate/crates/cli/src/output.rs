//! Rendering of a command's result document as JSON, CSV or text.
//!
//! Documents are `serde_json::Value`s with insertion-ordered objects, so the
//! field order is whatever the command built. Floats are always written with
//! 17 significant digits.

use std::io;

use num_complex::Complex64;
use serde_json::ser::Formatter;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct SignificantDigits;

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn to_json(doc: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SignificantDigits);
    serde::Serialize::serialize(doc, &mut ser).expect("in-memory JSON serialization");
    String::from_utf8(out).expect("JSON is UTF-8")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt_f64(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => to_json(v),
    }
}

/// Leaves of the document as `(dotted.key, text)` pairs. Arrays of
/// scalars stay one field, joined with `;`.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(";")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

/// A document whose `rows` field is an array of objects renders as one CSV
/// row per element; any other document as a single row.
fn to_csv(doc: &Value) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let rows: Vec<Vec<(String, String)>> = match doc.get("rows").and_then(Value::as_array) {
        Some(items) if items.iter().all(Value::is_object) => items
            .iter()
            .map(|x| {
                let mut flat = Vec::new();
                flatten("", x, &mut flat);
                flat
            })
            .collect(),
        _ => {
            let mut flat = Vec::new();
            let mut stripped = doc.clone();
            if let Some(map) = stripped.as_object_mut() {
                map.shift_remove("conventions");
            }
            flatten("", &stripped, &mut flat);
            vec![flat]
        }
    };
    if let Some(first) = rows.first() {
        writer.write_record(first.iter().map(|(k, _)| k)).expect("write to memory");
        for row in &rows {
            writer.write_record(row.iter().map(|(_, v)| v)).expect("write to memory");
        }
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("CSV is UTF-8")
}

fn to_text(doc: &Value) -> String {
    let mut flat = Vec::new();
    flatten("", doc, &mut flat);
    let width = flat.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    flat.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

pub fn render(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => to_json(doc) + "\n",
        Format::Csv => to_csv(doc),
        Format::Text => to_text(doc),
    }
}

/// Start a document with the command name and the convention block.
pub fn document(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), command.into());
    m.insert(
        "conventions".into(),
        json!({
            "chirality": "positive letter g = sigma_g: strand g crosses over strand g+1; the first letter is the top of the diagram",
            "a_value": "A = i*exp(-i*pi/(2k)), so t = A^-4 = exp(2*pi*i/k) and d = -A^2 - A^-2 = 2*cos(pi/k)",
            "orientation": "each component is oriented from its node with least (strand position, level), leaving downward",
            "jones": "V = (-A)^(3w) <L> with <unknot> = 1",
            "operator_order": "phi(B) = phi(g_1) ... phi(g_m)",
        }),
    );
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_17_significant_digits() {
        let doc = json!({ "x": 0.1, "y": -0.375, "n": 3 });
        assert_eq!(to_json(&doc), r#"{"x":1.0000000000000001e-1,"y":-3.7500000000000000e-1,"n":3}"#);
        let back: Value = serde_json::from_str(&to_json(&doc)).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn field_order_is_insertion_order() {
        let mut m = Map::new();
        m.insert("zeta".into(), 1.into());
        m.insert("alpha".into(), 2.into());
        assert_eq!(to_json(&Value::Object(m)), r#"{"zeta":1,"alpha":2}"#);
    }

    #[test]
    fn csv_and_text_flatten() {
        let doc = json!({ "command": "x", "value": { "re": 1.0, "im": 0.0 }, "word": [1, -2] });
        let csv = render(&doc, Format::Csv);
        assert_eq!(
            csv,
            "command,value.re,value.im,word\nx,1.0000000000000000e0,0.0000000000000000e0,1;-2\n"
        );
        let text = render(&doc, Format::Text);
        assert!(text.contains("value.re  1.0000000000000000e0"));
        let rows = json!({ "rows": [{ "a": 1, "b": "p" }, { "a": 2, "b": "q" }] });
        assert_eq!(render(&rows, Format::Csv), "a,b\n1,p\n2,q\n");
    }
}
