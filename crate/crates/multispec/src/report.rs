//! Machine-readable run reports. Every report echoes the command and the
//! full configuration, carries a command-specific `results` payload, and a
//! list of named pass/fail checks; the CLI exit code is derived from them.
//!
//! Complex numbers are rendered as `[re, im]` pairs and exact angles as
//! `"a/m"` strings, so reports are byte-identical across runs for a fixed
//! `(config, inputs, seed)`.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::linalg::CMat;
use crate::powerlattice::RootPoint;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: Vec<String>,
    pub config: RunConfig,
    pub results: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(
        command: Vec<String>,
        config: RunConfig,
        results: Value,
        checks: Vec<Check>,
    ) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            config,
            results,
            checks,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn cvec_json(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|z| complex_json(*z)).collect())
}

pub fn cmat_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn point_json(pt: &RootPoint) -> Value {
    json!({
        "coords": pt.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "period": pt.period,
        "type": pt.type_vector,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_deterministic() {
        let mk = || {
            Report::new(
                vec!["dims".into()],
                RunConfig::default(),
                json!({"n": 3, "z": complex_json(Complex64::new(0.5, -1.0))}),
                vec![Check::new("count", true, "3 == 3")],
            )
            .to_json_pretty()
        };
        assert_eq!(mk(), mk());
    }

    #[test]
    fn exit_semantics() {
        let r = Report::new(
            vec!["x".into()],
            RunConfig::default(),
            json!({}),
            vec![Check::new("a", true, ""), Check::new("b", false, "bad")],
        );
        assert!(!r.all_pass());
    }
}
