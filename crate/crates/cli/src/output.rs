//! TSV and JSON rendering. Every number is rounded once and the same
//! rounded value is written to both formats.

use depmine::redundancy::Verdict;
use depmine::{ContingencyTable, Dataset, RulePattern, Sign};
use serde::Serialize;
use serde_json::{json, Value};

/// p-value with six significant digits.
pub fn sci(p: f64) -> String {
    format!("{p:.5e}")
}

/// Descriptive measure with six decimals.
pub fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

fn num(text: &str) -> Value {
    text.parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Productive => "productive",
        Verdict::Superfluous => "superfluous",
        Verdict::Undecidable => "undecidable",
    }
}

/// One reported pattern: a rule or a dependency set.
#[derive(Debug, Clone)]
pub struct Row {
    pub pattern: String,
    pub fr: u64,
    pub phi: Option<f64>,
    pub delta: f64,
    pub gamma: Option<f64>,
    pub raw_p: f64,
    pub log_p: f64,
    pub adjusted_p: Option<f64>,
    pub verdicts: Vec<(String, String)>,
    pub extra: serde_json::Map<String, Value>,
}

impl Row {
    pub fn for_rule(d: &Dataset, r: &RulePattern, raw_p: f64, log_p: f64, adjusted_p: Option<f64>) -> Row {
        let t = &r.table;
        let mut extra = serde_json::Map::new();
        extra.insert("antecedent".into(), json!(r.antecedent.iter().map(|&a| d.name(a)).collect::<Vec<_>>()));
        extra.insert("consequent".into(), json!(d.name(r.consequent)));
        extra.insert("negated".into(), json!(r.sign == Sign::Negated));
        extra.insert("table".into(), table_json(t));
        Row {
            pattern: r.display(d),
            fr: t.n_xa,
            phi: (t.n_x > 0).then(|| t.n_xa as f64 / t.n_x as f64),
            delta: t.leverage(),
            gamma: (t.n_x > 0 && t.n_a > 0).then(|| t.n_xa as f64 * t.n as f64 / (t.n_x as f64 * t.n_a as f64)),
            raw_p,
            log_p,
            adjusted_p,
            verdicts: Vec::new(),
            extra,
        }
    }

    fn cells(&self) -> [String; 8] {
        let opt = |v: Option<f64>, f: fn(f64) -> String| v.map_or_else(|| "-".to_string(), f);
        let verdicts = if self.verdicts.is_empty() {
            "-".to_string()
        } else {
            self.verdicts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
        };
        [
            self.pattern.clone(),
            self.fr.to_string(),
            opt(self.phi, fixed),
            fixed(self.delta),
            opt(self.gamma, fixed),
            sci(self.raw_p),
            opt(self.adjusted_p, sci),
            verdicts,
        ]
    }

    pub fn json(&self) -> Value {
        let c = self.cells();
        let mut o = serde_json::Map::new();
        o.insert("pattern".into(), json!(self.pattern));
        o.insert("fr".into(), json!(self.fr));
        o.insert("phi".into(), num(&c[2]));
        o.insert("delta".into(), num(&c[3]));
        o.insert("gamma".into(), num(&c[4]));
        o.insert("raw_p".into(), num(&c[5]));
        o.insert("log_p".into(), num(&self.log_p.to_string()));
        o.insert("adjusted_p".into(), num(&c[6]));
        let verdicts: serde_json::Map<String, Value> =
            self.verdicts.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        o.insert("verdicts".into(), Value::Object(verdicts));
        o.extend(self.extra.clone());
        Value::Object(o)
    }
}

pub fn table_json(t: &ContingencyTable) -> Value {
    json!({ "n": t.n, "fr_x": t.n_x, "fr_a": t.n_a, "fr_xa": t.n_xa })
}

pub const PATTERN_HEADER: &str = "pattern\tfr\tphi\tdelta\tgamma\traw_p\tadjusted_p\tverdicts";

/// Identifies the input and the exact invocation.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub command: String,
    pub input: Option<InputInfo>,
    pub seed: u64,
    pub argv: Vec<String>,
    pub config: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
    pub format: String,
    pub n_rows: usize,
    pub n_cols: usize,
}

/// A command's result: summary fields, pattern rows and optional extra
/// tables (name, header, rows) that only the TSV form lays out separately.
pub struct Report {
    pub provenance: Provenance,
    pub summary: Vec<(String, Value)>,
    pub rows: Vec<Row>,
    pub row_header: &'static str,
    pub plain_rows: Vec<Vec<String>>,
    pub sections: Vec<Section>,
}

pub struct Section {
    pub name: &'static str,
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(provenance: Provenance) -> Report {
        Report {
            provenance,
            summary: Vec::new(),
            rows: Vec::new(),
            row_header: PATTERN_HEADER,
            plain_rows: Vec::new(),
            sections: Vec::new(),
        }
    }

    pub fn tsv(&self) -> String {
        let p = &self.provenance;
        let mut out = format!("# depmine {} seed={}", p.command, p.seed);
        if let Some(i) = &p.input {
            out += &format!(" input_sha256={}", i.sha256);
        }
        for (k, v) in &self.summary {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out += &format!(" {k}={v}");
        }
        out += "\n";
        out += self.row_header;
        out += "\n";
        for r in &self.rows {
            out += &r.cells().join("\t");
            out += "\n";
        }
        for r in &self.plain_rows {
            out += &r.join("\t");
            out += "\n";
        }
        for s in &self.sections {
            out += &format!("\n# {}\n{}\n", s.name, s.header.join("\t"));
            for r in &s.rows {
                out += &r.join("\t");
                out += "\n";
            }
        }
        out
    }

    pub fn json(&self) -> String {
        let mut o = serde_json::Map::new();
        o.insert("provenance".into(), serde_json::to_value(&self.provenance).expect("serializable"));
        for (k, v) in &self.summary {
            o.insert(k.clone(), v.clone());
        }
        if !self.rows.is_empty() || self.plain_rows.is_empty() {
            o.insert("patterns".into(), Value::Array(self.rows.iter().map(Row::json).collect()));
        }
        if !self.plain_rows.is_empty() {
            let keys: Vec<&str> = self.row_header.split('\t').collect();
            o.insert("rows".into(), Value::Array(self.plain_rows.iter().map(|r| record(&keys, r)).collect()));
        }
        for s in &self.sections {
            o.insert(s.name.into(), Value::Array(s.rows.iter().map(|r| record(s.header, r)).collect()));
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(o)).expect("serializable");
        text.push('\n');
        text
    }
}

/// Numeric-looking cells become numbers, `-` becomes null.
fn record(keys: &[&str], cells: &[String]) -> Value {
    let o: serde_json::Map<String, Value> = keys
        .iter()
        .zip(cells)
        .map(|(k, c)| {
            let v = match c.as_str() {
                "-" => Value::Null,
                "true" => Value::Bool(true),
                "false" => Value::Bool(false),
                s => match num(s) {
                    Value::Null => json!(s),
                    n => n,
                },
            };
            (k.to_string(), v)
        })
        .collect();
    Value::Object(o)
}
