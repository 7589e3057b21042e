use std::fmt::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Envelope written by every subcommand. Rationals inside `inputs` and
/// `outputs` are `"p/q"` strings, so the JSON form is lossless.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub passed: bool,
    /// violated properties, empty when `passed`
    pub failures: Vec<String>,
    /// results used without being recomputed here
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cited_premises: Vec<String>,
    pub timing_ms: u64,
    pub version: String,
}

impl RunReport {
    pub fn new(command: String, out: Outcome, elapsed: Duration) -> RunReport {
        RunReport {
            command,
            inputs: out.inputs,
            outputs: out.outputs,
            passed: out.failures.is_empty(),
            failures: out.failures,
            cited_premises: out.premises,
            timing_ms: elapsed.as_millis() as u64,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Indented `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let v = serde_json::to_value(self).expect("report serializes");
        render(&mut s, &v, 0);
        s
    }
}

/// What a subcommand hands back to `main`.
#[derive(Default)]
pub struct Outcome {
    pub inputs: Value,
    pub outputs: Value,
    pub failures: Vec<String>,
    pub premises: Vec<String>,
    /// printed instead of the text report when present
    pub csv: Option<String>,
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

// matrices of scalars print as one row per line
fn is_flat_matrix(a: &[Value]) -> bool {
    !a.is_empty() && a.iter().all(|r| matches!(r, Value::Array(x) if x.iter().all(|y| scalar(y).is_some() && !y.is_array())))
}

fn render(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        render(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(a) if is_flat_matrix(a) => {
            for r in a {
                writeln!(out, "{pad}{}", scalar(r).unwrap()).unwrap();
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}- [{i}]").unwrap();
                        render(out, x, depth + 1);
                    }
                }
            }
        }
        _ => writeln!(out, "{pad}{}", scalar(v).unwrap()).unwrap(),
    }
}
