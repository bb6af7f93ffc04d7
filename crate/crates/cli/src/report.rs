use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use octokern::Octonion;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A reported number: a scalar or the eight coordinates of an octonion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Scalar(f64),
    Octonion([f64; 8]),
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Scalar(x)
    }
}

impl From<Octonion> for Quantity {
    fn from(o: Octonion) -> Self {
        Quantity::Octonion(o.coords())
    }
}

impl Quantity {
    fn csv_field(&self) -> String {
        match self {
            Quantity::Scalar(x) => format!("{x:e}"),
            Quantity::Octonion(c) => c.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" "),
        }
    }
}

/// One row of a report. Rows with a tolerance are checks and satisfy
/// `pass == (residual <= tolerance)`; rows without one are measurements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub value: Quantity,
    pub target: Option<Quantity>,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub tail_bound: Option<f64>,
    pub pass: bool,
    /// Reported but excluded from the exit status.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRow {
    pub fn check(name: impl Into<String>, value: impl Into<Quantity>, residual: f64, tolerance: f64) -> Self {
        CheckRow {
            name: name.into(),
            value: value.into(),
            target: None,
            residual: Some(residual),
            tolerance: Some(tolerance),
            tail_bound: None,
            pass: residual <= tolerance,
            informational: false,
            std_error: None,
            d: None,
            note: None,
        }
    }

    pub fn measurement(name: impl Into<String>, value: impl Into<Quantity>) -> Self {
        CheckRow {
            residual: None,
            tolerance: None,
            pass: true,
            ..CheckRow::check(name, value, 0.0, 0.0)
        }
    }

    pub fn target(mut self, t: impl Into<Quantity>) -> Self {
        self.target = Some(t.into());
        self
    }

    pub fn tail_bound(mut self, t: f64) -> Self {
        self.tail_bound = Some(t);
        self
    }

    pub fn std_error(mut self, s: f64) -> Self {
        self.std_error = Some(s);
        self
    }

    pub fn at_d(mut self, d: f64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
    pub results: Vec<CheckRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> Self {
        RunReport {
            command: command.to_string(),
            params: BTreeMap::new(),
            seed,
            results: Vec::new(),
            warnings: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("parameters are plain data");
        self.params.insert(key.to_string(), v);
    }

    pub fn push(&mut self, row: CheckRow) {
        self.results.push(row);
    }

    pub fn row(&self, name: &str) -> Option<&CheckRow> {
        self.results.iter().find(|r| r.name == name)
    }

    /// True when every non-informational row passes.
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass || r.informational)
    }

    pub fn failures(&self) -> Vec<&CheckRow> {
        self.results.iter().filter(|r| !r.pass && !r.informational).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with `elapsed_ms` zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        RunReport {
            elapsed_ms: 0,
            ..self.clone()
        }
        .to_json()
    }

    /// Writes `name,d,value,target,residual` for every row.
    pub fn write_csv(&self, path: &Path) -> Result<(), CliError> {
        let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        w.write_record(["name", "d", "value", "target", "residual"]).map_err(io)?;
        for r in &self.results {
            w.write_record([
                r.name.clone(),
                r.d.map(|d| d.to_string()).unwrap_or_default(),
                r.value.csv_field(),
                r.target.as_ref().map(Quantity::csv_field).unwrap_or_default(),
                r.residual.map(|x| format!("{x:e}")).unwrap_or_default(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_residual_and_tolerance() {
        assert!(CheckRow::check("a", 1.0, 1e-10, 1e-9).pass);
        assert!(!CheckRow::check("a", 1.0, 1e-8, 1e-9).pass);
        assert!(!CheckRow::check("a", 1.0, f64::NAN, 1e-9).pass);
        let m = CheckRow::measurement("m", Octonion::ONE);
        assert!(m.pass && m.tolerance.is_none());
    }

    #[test]
    fn informational_rows_do_not_fail_a_run() {
        let mut r = RunReport::new("x", 0);
        r.push(CheckRow::check("ok", 0.0, 0.0, 1.0));
        r.push(CheckRow::check("bad", 0.0, 2.0, 1.0).informational());
        assert!(r.passed());
        r.push(CheckRow::check("bad2", 0.0, 2.0, 1.0));
        assert!(!r.passed());
        assert_eq!(r.failures().len(), 1);
    }

    #[test]
    fn json_shape() {
        let mut r = RunReport::new("eval", 3);
        r.param("d", 1.0);
        r.push(CheckRow::measurement("value", Octonion::real(0.5)).tail_bound(1e-13));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["command", "params", "seed", "results", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let row = &v["results"][0];
        assert_eq!(row["value"].as_array().unwrap().len(), 8);
        for key in ["name", "value", "target", "residual", "tolerance", "tail_bound", "pass"] {
            assert!(row.get(key).is_some(), "{key}");
        }
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
