//! Result records and their JSON / CSV renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};

/// Bumped whenever a field of [`ResultRecord`] changes meaning or shape.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Completed, with flagged rows.
    Warn,
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub library_version: String,
    pub command: String,
    pub status: Status,
    /// Effective configuration, defaults resolved.
    pub config: RunConfig,
    pub outputs: Value,
    pub warnings: Vec<String>,
    /// Only present with `--timings`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_s: Option<f64>,
    /// SHA-256 of the canonical JSON of `outputs` (suite only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub signature: Option<String>,
}

impl ResultRecord {
    pub fn new(config: &RunConfig, status: Status, outputs: Value, warnings: Vec<String>) -> Self {
        ResultRecord {
            schema_version: SCHEMA_VERSION,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            command: config.command.name().to_string(),
            status,
            config: config.clone(),
            outputs,
            warnings,
            wall_time_s: None,
            signature: None,
        }
    }

    pub fn sign(&mut self) {
        let bytes = serde_json::to_vec(&self.outputs).expect("outputs serialize");
        self.signature = Some(format!("{:x}", Sha256::digest(bytes)));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    /// A `rows` table renders as a table; anything else as `key,value` pairs
    /// with dotted paths.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        if let Some(rows) = self.outputs.get("rows").and_then(Value::as_array) {
            let header: Vec<String> = match rows.first().and_then(Value::as_object) {
                Some(obj) => obj.keys().cloned().collect(),
                None => Vec::new(),
            };
            w.write_record(&header).expect("in-memory write");
            for row in rows {
                let cells: Vec<String> = header.iter().map(|k| scalar(row.get(k).unwrap_or(&Value::Null))).collect();
                w.write_record(&cells).expect("in-memory write");
            }
        } else {
            w.write_record(["key", "value"]).expect("in-memory write");
            let mut flat = Vec::new();
            flatten("", &self.outputs, &mut flat);
            flat.push(("status".into(), scalar(&serde_json::to_value(self.status).expect("status"))));
            for (k, v) in flat {
                w.write_record([k, v]).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}
