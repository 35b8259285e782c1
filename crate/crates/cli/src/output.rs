//! Result documents and their JSON, CSV and table renderings.

use serde::Serialize;
use serde_json::Value;

use fqalg::estimator::{Estimate, EstimateValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// One emitted result. Rationals travel as `"p/q"` strings.
#[derive(Clone, Debug, Serialize)]
pub struct Doc {
    pub spec: String,
    pub op: String,
    pub value: Value,
    pub ci: Option<[f64; 2]>,
    pub samples: Option<u64>,
    pub seed: String,
    pub method: String,
    pub version: &'static str,
    pub condition: Option<String>,
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Doc {
    pub fn new(spec: &str, op: &str, seed: u64, method: &str, value: Value) -> Doc {
        Doc {
            spec: spec.to_string(),
            op: op.to_string(),
            value,
            ci: None,
            samples: None,
            seed: seed.to_string(),
            method: method.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            condition: None,
            d: None,
            detail: Value::Null,
        }
    }

    pub fn from_estimate(spec: &str, op: &str, e: &Estimate) -> Doc {
        let value = match &e.value {
            EstimateValue::Exact(r) => Value::String(r.to_string()),
            EstimateValue::Approx(x) => serde_json::json!(x),
        };
        let method = serde_json::to_value(e.method)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        let mut doc = Doc::new(spec, op, e.seed, &method, value);
        doc.ci = Some([e.ci.0, e.ci.1]);
        doc.samples = Some(e.samples);
        doc.condition = Some(e.condition.clone());
        doc.d = Some(e.d);
        doc
    }

    pub fn with_detail(mut self, detail: impl Serialize) -> Doc {
        self.detail = serde_json::to_value(detail).unwrap_or(Value::Null);
        self
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(docs: &[Doc], format: Format) -> String {
    match format {
        Format::Json => {
            let text = if docs.len() == 1 {
                serde_json::to_string_pretty(&docs[0])
            } else {
                serde_json::to_string_pretty(docs)
            };
            text.expect("documents serialize") + "\n"
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "spec",
                "op",
                "condition",
                "d",
                "value",
                "ci_low",
                "ci_high",
                "samples",
                "seed",
                "method",
            ])
            .expect("in-memory write");
            for d in docs {
                let (lo, hi) = d.ci.map_or((String::new(), String::new()), |c| {
                    (c[0].to_string(), c[1].to_string())
                });
                w.write_record([
                    d.spec.clone(),
                    d.op.clone(),
                    d.condition.clone().unwrap_or_default(),
                    d.d.map(|x| x.to_string()).unwrap_or_default(),
                    plain(&d.value),
                    lo,
                    hi,
                    d.samples.map(|x| x.to_string()).unwrap_or_default(),
                    d.seed.clone(),
                    d.method.clone(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
        }
        Format::Table => {
            let rows: Vec<[String; 5]> = docs
                .iter()
                .map(|d| {
                    let ci =
                        d.ci.map_or(String::new(), |c| format!("[{:.6}, {:.6}]", c[0], c[1]));
                    [
                        d.spec.clone(),
                        d.op.clone(),
                        plain(&d.value),
                        ci,
                        d.method.clone(),
                    ]
                })
                .collect();
            let header = ["spec", "op", "value", "ci", "method"].map(String::from);
            let mut widths = header.clone().map(|h| h.chars().count());
            for r in &rows {
                for (w, c) in widths.iter_mut().zip(r) {
                    *w = (*w).max(c.chars().count());
                }
            }
            let line = |r: &[String; 5]| {
                r.iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut out = line(&header) + "\n";
            for r in &rows {
                out += &(line(r) + "\n");
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_commas() {
        let d = Doc::new("M(2,1,2)", "dgen", 0, "exact", serde_json::json!(2));
        let text = render(&[d], Format::Csv);
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("\"M(2,1,2)\",dgen"));
    }

    #[test]
    fn table_has_header() {
        let d = Doc::new("k", "dgen", 0, "exact", serde_json::json!(0));
        assert!(render(&[d], Format::Table).starts_with("spec"));
    }
}
