//! Rendering of command outcomes as text, JSON or CSV.

use ffzeta::rings::{LaurentSeries, INF_PREC};
use ffzeta::scalars::Field;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

/// A flat table for CSV output.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub kind: &'static str,
    pub result: Value,
    pub table: Option<Table>,
    pub pass: bool,
}

impl Outcome {
    pub fn new(kind: &'static str, result: Value, pass: bool) -> Outcome {
        Outcome { kind, result, table: None, pass }
    }

    pub fn with_table(mut self, t: Table) -> Outcome {
        self.table = Some(t);
        self
    }
}

/// JSON form of a series: the wire fields plus a readable rendering.
pub fn series_json(s: &LaurentSeries, f: &Field) -> Value {
    let mut v = serde_json::to_value(s.to_wire(f)).expect("wire form serializes");
    v["text"] = Value::String(s.render(f));
    v
}

/// Precision as reported to users; `None` for exact values.
pub fn prec_json(s: &LaurentSeries) -> Value {
    if s.abs_prec() >= INF_PREC {
        Value::Null
    } else {
        json!(s.abs_prec())
    }
}

pub fn envelope(out: &Outcome, cfg: &RunConfig, field: &Field) -> Value {
    json!({
        "kind": out.kind,
        "pass": out.pass,
        "config": {
            "q": cfg.q,
            "field": field.spec().descriptor(),
            "prec": cfg.prec,
            "cap": cfg.cap,
            "seed": cfg.seed,
        },
        "result": out.result,
    })
}

pub fn render(out: &Outcome, cfg: &RunConfig, field: &Field) -> Result<String, String> {
    match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&envelope(out, cfg, field)).expect("json");
            s.push('\n');
            Ok(s)
        }
        Format::Text => {
            let mut s = String::new();
            text_value(&envelope(out, cfg, field), 0, &mut s);
            Ok(s)
        }
        Format::Csv => {
            let table = out
                .table
                .as_ref()
                .ok_or_else(|| format!("{} output is not a flat table; use text or json", out.kind))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            let meta = ["kind", "q", "seed"];
            let header: Vec<&str> = meta.iter().copied().chain(table.header.iter().map(|s| s.as_str())).collect();
            w.write_record(&header).map_err(|e| e.to_string())?;
            for row in &table.rows {
                let lead = [out.kind.to_string(), cfg.q.to_string(), cfg.seed.to_string()];
                w.write_record(lead.iter().chain(row.iter())).map_err(|e| e.to_string())?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn text_map(m: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    for (k, v) in m {
        match scalar(v) {
            Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                text_value(v, indent + 1, out);
            }
        }
    }
}

fn text_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => text_map(m, indent, out),
        Value::Array(a) => {
            for item in a {
                match (scalar(item), item) {
                    (Some(s), _) => out.push_str(&format!("{pad}- {s}\n")),
                    (None, Value::Object(m)) => {
                        out.push_str(&format!("{pad}-\n"));
                        text_map(m, indent + 1, out);
                    }
                    (None, other) => text_value(other, indent + 1, out),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
