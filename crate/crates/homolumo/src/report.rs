//! Machine-readable run reports for the command-line tool.
//!
//! Every subcommand can emit a [`RunReport`]: a versioned JSON envelope
//! carrying an echo of the invocation, a description of the instance, the
//! computed result, per-stage timings, and any solver diagnostics. Reports
//! round-trip through JSON without loss.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::optimizer::BridgeSolution;

/// Version stamp written into every report.
pub const SCHEMA_VERSION: u32 = 1;

/// The JSON envelope emitted by `--json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    /// Name of the emitting tool.
    pub tool: String,
    /// Version of the emitting tool.
    pub version: String,
    /// The subcommand and arguments, echoed back.
    pub command: String,
    /// Instance description: graph names, bridge vertices, constraints.
    pub instance: serde_json::Value,
    /// The computed result; its shape depends on the subcommand.
    pub result: serde_json::Value,
    /// Per-stage wall-clock seconds.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub timings: BTreeMap<String, f64>,
    /// Human-readable notes: warnings, skipped cells, solver remarks.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool: "homolumo".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            instance: serde_json::Value::Null,
            result: serde_json::Value::Null,
            timings: BTreeMap::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<RunReport, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Serializable view of a [`BridgeSolution`].
#[derive(Debug, Clone, Serialize)]
pub struct SolutionView {
    pub gap: f64,
    pub mu: f64,
    pub eta: f64,
    pub spectrum: Vec<f64>,
    /// Bridge edges as 1-based (first-graph vertex, second-graph vertex).
    pub edges: Vec<(usize, usize)>,
    /// The bridging in `column ↦ vertices` notation.
    pub bridging: String,
    pub nodes_explored: u64,
    pub wall_time: f64,
}

impl From<&BridgeSolution> for SolutionView {
    fn from(s: &BridgeSolution) -> Self {
        SolutionView {
            gap: s.gap,
            mu: s.mu,
            eta: s.eta,
            spectrum: s.spectrum.clone(),
            edges: s.bridge.pairs(),
            bridging: s.bridge.notation(),
            nodes_explored: s.nodes_explored,
            wall_time: s.wall_time,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_through_json() {
        let mut r = RunReport::new("gap F0 --json -");
        r.instance = serde_json::json!({ "graph": "F0", "n": 6 });
        r.result = serde_json::json!({
            "gap": 0.8721357118463821,
            "lambda_plus": 0.6180339887498949,
            "spectrum": [2.1149, 1.0, 0.618034, -0.254102, -1.618034, -1.8608],
        });
        r.timings.insert("gap".into(), 0.000321);
        r.diagnostics.push("example note".into());
        let text = r.to_json();
        let back = RunReport::from_json(&text).unwrap();
        assert_eq!(r, back);
        assert_eq!(back.schema_version, SCHEMA_VERSION);
    }

    #[test]
    fn report_defaults_are_empty_and_omitted() {
        let r = RunReport::new("bridgeable F0 2");
        let text = r.to_json();
        assert!(!text.contains("timings"));
        assert!(!text.contains("diagnostics"));
        let back = RunReport::from_json(&text).unwrap();
        assert_eq!(r, back);
    }
}
