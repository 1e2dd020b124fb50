//! The report produced by every CLI command, with table and JSON renderings.
//!
//! JSON keys are fixed: optional parts serialize as `null` or `[]` rather
//! than disappearing.

use std::fmt::Write as _;

use serde::Serialize;

use crate::verify::SuiteReport;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricIdentity {
    /// `builtin` or `file`.
    pub source: String,
    /// Catalog name or file path.
    pub name: String,
    pub dim: usize,
    /// FNV-1a hash of file contents, hex.
    pub hash: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    /// Index into `Report::points`.
    pub point: usize,
    pub name: String,
    pub weight: u32,
    pub value: f64,
    pub formula_path: String,
    pub partial: bool,
    pub expression: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub metric: Option<MetricIdentity>,
    pub points: Vec<Vec<f64>>,
    pub order: Option<usize>,
    pub quantities: Vec<Quantity>,
    pub suites: Vec<SuiteReport>,
    /// `None` when nothing was verified.
    pub passed: Option<bool>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: Vec<String>) -> Report {
        Report {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            metric: None,
            points: Vec::new(),
            order: None,
            quantities: Vec::new(),
            suites: Vec::new(),
            passed: None,
            elapsed_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table. Numbers use the same shortest round-trip form as
    /// the JSON output.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {}: {}", self.tool, self.version, self.command.join(" ")).unwrap();
        if let Some(m) = &self.metric {
            let hash = m.hash.as_deref().map(|h| format!(" hash {h}")).unwrap_or_default();
            writeln!(s, "metric  {}:{} (n = {}){hash}", m.source, m.name, m.dim).unwrap();
        }
        if let Some(k) = self.order {
            writeln!(s, "order   {k}").unwrap();
        }
        for (i, p) in self.points.iter().enumerate() {
            let p: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            writeln!(s, "point {i} ({})", p.join(", ")).unwrap();
        }
        if !self.quantities.is_empty() {
            let width = self.quantities.iter().map(|q| q.name.len()).max().unwrap_or(0);
            writeln!(s).unwrap();
            for q in &self.quantities {
                let flag = if q.partial { "  PARTIAL" } else { "" };
                writeln!(
                    s,
                    "[{}] {:<width$}  w={}  {:<24}  {}{flag}",
                    q.point,
                    q.name,
                    q.weight,
                    number(q.value),
                    q.formula_path
                )
                .unwrap();
                if let Some(e) = &q.expression {
                    writeln!(s, "      = {e}").unwrap();
                }
            }
        }
        for suite in &self.suites {
            writeln!(s, "\nsuite {}", suite.suite).unwrap();
            for c in &suite.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                writeln!(s, "  {tag}  {}  ({})", c.name, c.detail).unwrap();
            }
            let n_pass = suite.checks.iter().filter(|c| c.passed).count();
            writeln!(s, "  {n_pass}/{} passed", suite.checks.len()).unwrap();
        }
        if let Some(p) = self.passed {
            writeln!(s, "\n{}", if p { "ALL PASSED" } else { "FAILURES" }).unwrap();
        }
        writeln!(s, "elapsed {:.1} ms", self.elapsed_ms).unwrap();
        s
    }
}

/// Shortest round-trip digits, in exponent form away from unit scale.
fn number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// 64-bit FNV-1a, used to identify metric files.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}
