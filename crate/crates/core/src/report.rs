//! Self-describing result reports with text, JSON and CSV renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// One named scalar, optionally checked against a reference value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    #[serde(rename = "paper_value", skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    /// Soft checks are reported but never fail the run.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub soft: bool,
}

impl Quantity {
    fn status(&self) -> &'static str {
        match (self.pass, self.soft) {
            (None, _) => "",
            (Some(true), _) => "PASS",
            (Some(false), true) => "WARN",
            (Some(false), false) => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub version: String,
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: Vec<Quantity>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

/// Output encodings accepted by [`Report::render`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(Error::Config(format!("unknown format '{s}'"))),
        }
    }
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Self {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            tables: Vec::new(),
            notes: Vec::new(),
            provenance: Provenance { seed, version: env!("CARGO_PKG_VERSION").to_string(), timestamp },
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    /// Records an unchecked value.
    pub fn value(&mut self, name: &str, value: f64) {
        self.results.push(Quantity {
            name: name.to_string(),
            value,
            reference: None,
            tolerance: None,
            pass: None,
            soft: false,
        });
    }

    /// Records a value that must lie within `tolerance` of `reference`.
    pub fn check(&mut self, name: &str, value: f64, reference: f64, tolerance: f64) {
        self.push_check(name, value, reference, tolerance, false);
    }

    /// Like [`Report::check`] but a miss is only a warning.
    pub fn soft_check(&mut self, name: &str, value: f64, reference: f64, tolerance: f64) {
        self.push_check(name, value, reference, tolerance, true);
    }

    fn push_check(&mut self, name: &str, value: f64, reference: f64, tolerance: f64, soft: bool) {
        self.results.push(Quantity {
            name: name.to_string(),
            value,
            reference: Some(reference),
            tolerance: Some(tolerance),
            pass: Some((value - reference).abs() <= tolerance),
            soft,
        });
    }

    pub fn table(&mut self, name: &str, columns: &[&str], rows: Vec<Vec<String>>) {
        self.tables.push(Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Replaces every checked tolerance and re-evaluates pass flags.
    pub fn override_tolerance(&mut self, tolerance: f64) {
        for q in &mut self.results {
            if let Some(reference) = q.reference {
                q.tolerance = Some(tolerance);
                q.pass = Some((q.value - reference).abs() <= tolerance);
            }
        }
    }

    /// Appends another report's contents with names prefixed by its command.
    pub fn absorb(&mut self, other: Report) {
        let prefix = other.command;
        self.results.extend(other.results.into_iter().map(|mut q| {
            q.name = format!("{prefix}.{}", q.name);
            q
        }));
        self.tables.extend(other.tables.into_iter().map(|mut t| {
            t.name = format!("{prefix}.{}", t.name);
            t
        }));
        self.notes.extend(other.notes.into_iter().map(|n| format!("{prefix}: {n}")));
    }

    /// True when no hard check failed.
    pub fn passed(&self) -> bool {
        self.results.iter().all(|q| q.soft || q.pass != Some(false))
    }

    pub fn find(&self, name: &str) -> Option<&Quantity> {
        self.results.iter().find(|q| q.name == name)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| Error::Config(e.to_string()))
    }

    /// The `results` array alone, which is independent of run time.
    pub fn results_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.results).map_err(|e| Error::Config(e.to_string()))
    }

    /// One row per named quantity.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Config(e.to_string());
        w.write_record(["name", "value", "paper_value", "tolerance", "pass"]).map_err(err)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for q in &self.results {
            let pass = q.pass.map(|p| p.to_string()).unwrap_or_default();
            w.write_record([q.name.clone(), q.value.to_string(), opt(q.reference), opt(q.tolerance), pass])
                .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.command);
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "inputs: {}", inputs.join(" "));
        let width = self.results.iter().map(|q| q.name.len()).max().unwrap_or(4).max(4);
        let _ = writeln!(out, "{:<width$}  {:>22}  {:>22}  {:>9}  status", "name", "value", "reference", "tol");
        for q in &self.results {
            let reference = q.reference.map(|r| format!("{r:.12}")).unwrap_or_default();
            let tol = q.tolerance.map(|t| if t == 0.0 { "0".into() } else { format!("{t:.0e}") }).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:<width$}  {:>22.12}  {:>22}  {:>9}  {}",
                q.name,
                q.value,
                reference,
                tol,
                q.status()
            );
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n[{}]", t.name);
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| t.rows.iter().map(|r| r[j].len()).chain([t.columns[j].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
            };
            let _ = writeln!(out, "{}", line(&t.columns));
            for r in &t.rows {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", 0);
        r.input("cutoff", 3);
        r.check("p", 0.25, 0.25, 1e-9);
        r.value("free", 1.5);
        r.soft_check("soft", 0.5, 0.0, 0.1);
        r
    }

    #[test]
    fn soft_misses_do_not_fail() {
        let mut r = sample();
        assert!(r.passed());
        r.check("bad", 1.0, 0.0, 0.5);
        assert!(!r.passed());
        assert!(r.to_text().contains("FAIL"));
    }

    #[test]
    fn json_schema_fields() {
        let v: Value = serde_json::from_str(&sample().to_json().unwrap()).unwrap();
        for key in ["command", "inputs", "results", "provenance"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let p = &v["results"][0];
        assert_eq!(p["paper_value"], 0.25);
        assert_eq!(p["pass"], true);
        assert!(v["results"][1].get("paper_value").is_none());
        assert!(v["provenance"].get("seed").is_some());
    }

    #[test]
    fn csv_has_row_per_quantity() {
        let csv = sample().to_csv().unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("name,value,paper_value,tolerance,pass"));
    }

    #[test]
    fn tolerance_override_reevaluates() {
        let mut r = sample();
        r.override_tolerance(1.0);
        assert_eq!(r.find("soft").unwrap().pass, Some(true));
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut all = Report::new("all", 0);
        all.absorb(sample());
        assert!(all.find("demo.p").is_some());
    }
}
