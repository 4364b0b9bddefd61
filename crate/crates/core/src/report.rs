//! The document written by the `vega` command.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::decompose::DecompositionReport;
use crate::engine::{ComputePlan, Mode};
use crate::num17;
use crate::sample::IndexReport;

pub const TOOL_NAME: &str = "vega";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub path: String,
    pub value_column: String,
    pub weight_column: Option<String>,
    pub group_column: Option<String>,
    pub rows_read: usize,
    pub rows_dropped: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanEcho {
    pub mode: Mode,
    pub threads: usize,
    pub chunk: usize,
    pub strict: bool,
}

impl PlanEcho {
    pub fn new(plan: &ComputePlan, strict: bool) -> Self {
        PlanEcho {
            mode: plan.mode,
            threads: plan.threads,
            chunk: plan.chunk,
            strict,
        }
    }
}

/// Everything one invocation computed. Contains no timestamps, so identical
/// inputs give byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: ToolInfo,
    pub dataset: DatasetInfo,
    pub plan: PlanEcho,
    pub measures: Vec<IndexReport>,
    pub decomposition: Option<DecompositionReport>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<RunReport> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let d = &self.dataset;
        let _ = writeln!(out, "{} {}", self.tool.name, self.tool.version);
        let _ = writeln!(
            out,
            "input  {}  column {}  rows {} (dropped {})",
            d.path, d.value_column, d.rows_read, d.rows_dropped
        );
        let mode = match self.plan.mode {
            Mode::Exact => "exact".to_string(),
            Mode::Quantile(q) => format!("quantile({q})"),
        };
        let _ = writeln!(out, "mode   {mode}  threads {}", self.plan.threads);
        out.push('\n');
        let _ = writeln!(
            out,
            "{:<14} {:>22} {:>14} {:>16} {:>12}  warnings",
            "measure", "value", "population", "mean", "nonpos"
        );
        for m in &self.measures {
            let warnings: Vec<_> = m.warnings.iter().map(|w| w.code()).collect();
            let _ = writeln!(
                out,
                "{:<14} {:>22.17} {:>14} {:>16.6} {:>12.4}  {}",
                m.measure.name(),
                m.value,
                m.population,
                m.mean,
                m.nonpositive_share,
                warnings.join(",")
            );
        }
        if let Some(dec) = &self.decomposition {
            out.push('\n');
            let _ = writeln!(
                out,
                "{:<16} {:>12} {:>14} {:>20} {:>20} {:>20}",
                "group", "population", "mean", "within V", "weight", "contribution"
            );
            for g in &dec.groups {
                let within = g.within_index.map_or("undefined".to_string(), |v| format!("{v:.15}"));
                let _ = writeln!(
                    out,
                    "{:<16} {:>12} {:>14.6} {:>20} {:>20.15} {:>20.15}",
                    g.label, g.population, g.mean, within, g.weight, g.contribution
                );
            }
            let _ = writeln!(out, "between          {}", num17::format(dec.between_term));
            let _ = writeln!(out, "total            {}", num17::format(dec.total));
            let _ = writeln!(out, "residual         {}", num17::format(dec.residual));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{decompose, GroupedSample};
    use crate::engine::evaluate;
    use crate::sample::{Measure, Sample};

    fn sample_report() -> RunReport {
        let s = Sample::new(vec![0.1, 7.0, 1.0 / 3.0, 2.0, 2e-7]);
        let plan = ComputePlan::exact();
        let measures = Measure::ALL.iter().map(|&m| evaluate(&s, m, &plan).unwrap()).collect();
        let labels = ["a", "b", "a", "b", "c"].map(String::from).to_vec();
        RunReport {
            tool: ToolInfo::default(),
            dataset: DatasetInfo {
                path: "x.csv".into(),
                value_column: "v".into(),
                weight_column: None,
                group_column: Some("g".into()),
                rows_read: 5,
                rows_dropped: 0,
                warnings: vec![],
            },
            plan: PlanEcho::new(&plan, false),
            measures,
            decomposition: Some(decompose(&GroupedSample::new(s, labels)).unwrap()),
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let report = sample_report();
        let json = report.to_json();
        let back = RunReport::from_json(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json(), json);
    }

    #[test]
    fn numbers_use_seventeen_digits() {
        let json = sample_report().to_json();
        let value_line = json.lines().find(|l| l.contains("\"value\"")).unwrap();
        let digits: String = value_line
            .split(':')
            .nth(1)
            .unwrap()
            .chars()
            .take_while(|c| *c != 'e')
            .filter(|c| c.is_ascii_digit())
            .collect();
        assert_eq!(digits.len(), 17, "{value_line}");
    }

    #[test]
    fn table_lists_every_measure_and_group() {
        let table = sample_report().to_table();
        for needle in ["gini", "vega", "angular_mean", "between", "residual"] {
            assert!(table.contains(needle), "{needle} missing from\n{table}");
        }
    }
}
