//! Published benchmark rows and a shared runner for recomputing them.
//!
//! Nine bridging instances form the benchmark: fulvene and double-fulvene
//! targets bridged over fulvene, path targets bridged over `P(4)`, and the
//! comb target. [`UNCONSTRAINED`] carries the expected bound chain for the
//! free problem, [`DEGREE_CAPPED`] for the same instances under the
//! chemical max-degree-3 constraint. The reproduce subcommand and the
//! acceptance suite both recompute rows through [`run_row`].

use crate::bridging::{bridge, BridgeProblem, ConstraintSet};
use crate::graph::builtin;
use crate::optimizer::{bounds_report, OptimizerError};

/// One published row: the instance and its expected values.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub ga: &'static str,
    pub gb: &'static str,
    pub bridge: &'static [usize],
    /// Degree cap in force for this row, if any.
    pub max_degree: Option<usize>,
    /// Expected lower bound at the exact binary coupling-norm minimum.
    pub lower_sdp: f64,
    /// Expected lower bound at the box-relaxed coupling-norm minimum.
    pub lower_sir: f64,
    /// Expected exact optimum.
    pub opt: f64,
    /// Expected continuous-relaxation upper bound.
    pub upper_sdp: f64,
    /// The published optimal bridging (informational: optima need not be
    /// unique, so recomputed bridgings may differ while matching `opt`).
    pub bridging: &'static str,
    /// The exact search for this row is beyond the default time budget;
    /// by default only the three bound columns are recomputed.
    pub heavy_exact: bool,
}

/// Benchmark rows without side constraints.
pub static UNCONSTRAINED: [TableRow; 9] = [
    TableRow {
        ga: "F0",
        gb: "F0",
        bridge: &[1, 2],
        max_degree: None,
        lower_sdp: 0.233688,
        lower_sir: 0.531664,
        opt: 0.74947,
        upper_sdp: 0.87214,
        bridging: "1\u{21a6}3,5; 2\u{21a6}6",
        heavy_exact: false,
    },
    TableRow {
        ga: "F0",
        gb: "F0",
        bridge: &[1, 4],
        max_degree: None,
        lower_sdp: 0.333126,
        lower_sir: 0.72678,
        opt: 0.85828,
        upper_sdp: 0.87214,
        bridging: "1\u{21a6}\u{2205}; 4\u{21a6}3,5,6",
        heavy_exact: false,
    },
    TableRow {
        ga: "F0",
        gb: "F0",
        bridge: &[1, 3],
        max_degree: None,
        lower_sdp: 0.333126,
        lower_sir: 0.719668,
        opt: 0.81389,
        upper_sdp: 0.87214,
        bridging: "1\u{21a6}4; 3\u{21a6}4",
        heavy_exact: false,
    },
    TableRow {
        ga: "F1",
        gb: "F0",
        bridge: &[1, 2],
        max_degree: None,
        lower_sdp: 0.163626,
        lower_sir: 0.450022,
        opt: 0.56655,
        upper_sdp: 0.56666,
        bridging: "1\u{21a6}\u{2205}; 2\u{21a6}9,11,12",
        heavy_exact: true,
    },
    TableRow {
        ga: "P(4)",
        gb: "P(4)",
        bridge: &[2, 3],
        max_degree: None,
        lower_sdp: 0.472136,
        lower_sir: 0.86953,
        opt: 1.06418,
        upper_sdp: 1.23607,
        bridging: "2\u{21a6}2,4; 3\u{21a6}1,3",
        heavy_exact: false,
    },
    TableRow {
        ga: "P(6)",
        gb: "P(4)",
        bridge: &[1, 3],
        max_degree: None,
        lower_sdp: 0.367365,
        lower_sir: 0.811369,
        opt: 0.87366,
        upper_sdp: 0.89008,
        bridging: "1\u{21a6}4,6; 3\u{21a6}4,6",
        heavy_exact: false,
    },
    TableRow {
        ga: "P(6)",
        gb: "P(4)",
        bridge: &[2, 3],
        max_degree: None,
        lower_sdp: 0.367365,
        lower_sir: 0.737641,
        opt: 0.87321,
        upper_sdp: 0.89008,
        bridging: "2\u{21a6}4,6; 3\u{21a6}1,3",
        heavy_exact: false,
    },
    TableRow {
        ga: "P(10)",
        gb: "P(4)",
        bridge: &[2, 3],
        max_degree: None,
        lower_sdp: 0.252282,
        lower_sir: 0.523808,
        opt: 0.56837,
        upper_sdp: 0.56926,
        bridging: "2\u{21a6}8,10; 3\u{21a6}\u{2205}",
        heavy_exact: false,
    },
    TableRow {
        ga: "COMB(4)",
        gb: "P(4)",
        bridge: &[2],
        max_degree: None,
        lower_sdp: 0.38832,
        lower_sir: 0.73094,
        opt: 0.93258,
        upper_sdp: 0.95452,
        bridging: "2\u{21a6}3,8",
        heavy_exact: false,
    },
];

/// Benchmark rows under the chemical max-degree-3 constraint.
pub static DEGREE_CAPPED: [TableRow; 9] = [
    TableRow {
        ga: "F0",
        gb: "F0",
        bridge: &[1, 2],
        max_degree: Some(3),
        lower_sdp: 0.233688,
        lower_sir: 0.507678,
        opt: 0.720830,
        upper_sdp: 0.87214,
        bridging: "1\u{21a6}\u{2205}; 2\u{21a6}6",
        heavy_exact: false,
    },
    TableRow {
        ga: "F0",
        gb: "F0",
        bridge: &[1, 4],
        max_degree: Some(3),
        lower_sdp: 0.233688,
        lower_sir: 0.468053,
        opt: 0.720830,
        upper_sdp: 0.87214,
        bridging: "1\u{21a6}6; 4\u{21a6}\u{2205}",
        heavy_exact: false,
    },
    TableRow {
        ga: "F0",
        gb: "F0",
        bridge: &[1, 3],
        max_degree: Some(3),
        lower_sdp: 0.333126,
        lower_sir: 0.706635,
        opt: 0.776875,
        upper_sdp: 0.87214,
        bridging: "1\u{21a6}6; 3\u{21a6}6",
        heavy_exact: false,
    },
    TableRow {
        ga: "F1",
        gb: "F0",
        bridge: &[1, 2],
        max_degree: Some(3),
        lower_sdp: 0.163626,
        lower_sir: 0.389941,
        opt: 0.493727,
        upper_sdp: 0.566658,
        bridging: "1\u{21a6}6; 2\u{21a6}\u{2205}",
        heavy_exact: false,
    },
    TableRow {
        ga: "P(4)",
        gb: "P(4)",
        bridge: &[2, 3],
        max_degree: Some(3),
        lower_sdp: 0.472136,
        lower_sir: 0.869530,
        opt: 0.954520,
        upper_sdp: 1.23607,
        bridging: "3\u{21a6}\u{2205}; 2\u{21a6}2",
        heavy_exact: false,
    },
    TableRow {
        ga: "P(6)",
        gb: "P(4)",
        bridge: &[1, 3],
        max_degree: Some(3),
        lower_sdp: 0.367365,
        lower_sir: 0.811369,
        opt: 0.828427,
        upper_sdp: 0.89008,
        bridging: "1\u{21a6}4,6; 3\u{21a6}2",
        heavy_exact: false,
    },
    TableRow {
        ga: "P(6)",
        gb: "P(4)",
        bridge: &[2, 3],
        max_degree: Some(3),
        lower_sdp: 0.367365,
        lower_sir: 0.737641,
        opt: 0.820751,
        upper_sdp: 0.89008,
        bridging: "2\u{21a6}5; 3\u{21a6}2",
        heavy_exact: false,
    },
    TableRow {
        ga: "P(10)",
        gb: "P(4)",
        bridge: &[2, 3],
        max_degree: Some(3),
        lower_sdp: 0.252282,
        lower_sir: 0.523808,
        opt: 0.559046,
        upper_sdp: 0.56926,
        // The published cell prints a vertex outside P(10)'s range; the
        // value column is consistent, so only values are compared.
        bridging: "2\u{21a6}\u{2205}; 3\u{21a6}11",
        heavy_exact: false,
    },
    TableRow {
        ga: "COMB(4)",
        gb: "P(4)",
        bridge: &[2],
        max_degree: Some(3),
        lower_sdp: 0.38832,
        lower_sir: 0.692266,
        opt: 0.890084,
        upper_sdp: 0.95452,
        bridging: "2\u{21a6}4",
        heavy_exact: false,
    },
];

/// Recomputed values for one row.
#[derive(Debug, Clone)]
pub struct RowOutcome {
    pub lower_sdp: f64,
    pub lower_sir: f64,
    /// `None` when the exact search was skipped.
    pub opt: Option<f64>,
    pub upper_sdp: f64,
    /// Bridging notation of the found optimum, when computed.
    pub bridging: Option<String>,
    /// Largest vertex degree of the optimal bridged graph, when computed.
    pub max_degree_of_optimum: Option<usize>,
}

/// Builds the row's [`BridgeProblem`].
pub fn row_problem(row: &TableRow) -> Result<BridgeProblem, OptimizerError> {
    let ga = builtin(row.ga).map_err(|e| OptimizerError::Fault(e.to_string()))?;
    let gb = builtin(row.gb).map_err(|e| OptimizerError::Fault(e.to_string()))?;
    let constraints = ConstraintSet { max_degree: row.max_degree, ..ConstraintSet::default() };
    BridgeProblem::new(ga, gb, row.bridge.to_vec(), constraints)
        .map_err(|e| OptimizerError::Fault(e.to_string()))
}

/// Recomputes one row; `with_exact` controls whether the exact search runs.
pub fn run_row(row: &TableRow, with_exact: bool) -> Result<RowOutcome, OptimizerError> {
    let problem = row_problem(row)?;
    let outcome = bounds_report(&problem, with_exact)?;
    let report = &outcome.report;
    let (bridging, max_degree_of_optimum) = match &outcome.solution {
        Some(sol) => {
            let gc = bridge(problem.ga(), problem.gb(), &sol.bridge)
                .map_err(|e| OptimizerError::Fault(e.to_string()))?;
            let max_deg = gc.degrees().into_iter().max().unwrap_or(0);
            (Some(sol.bridge.notation()), Some(max_deg))
        }
        None => (None, None),
    };
    Ok(RowOutcome {
        lower_sdp: report.lower_sdp,
        lower_sir: report.lower_sir,
        opt: report.opt,
        upper_sdp: report.upper_sdp,
        bridging,
        max_degree_of_optimum,
    })
}

/// One compared cell of a recomputed row.
#[derive(Debug, Clone)]
pub struct CellCheck {
    pub cell: &'static str,
    pub expected: f64,
    /// `None` when the cell was skipped.
    pub got: Option<f64>,
}

impl CellCheck {
    /// `None` when skipped, otherwise whether the cell matched.
    pub fn passed(&self, tol: f64) -> Option<bool> {
        self.got.map(|g| (g - self.expected).abs() <= tol)
    }
}

/// Pairs the recomputed values with the published cells.
pub fn check_row(row: &TableRow, out: &RowOutcome) -> Vec<CellCheck> {
    vec![
        CellCheck { cell: "lower_sdp", expected: row.lower_sdp, got: Some(out.lower_sdp) },
        CellCheck { cell: "lower_sir", expected: row.lower_sir, got: Some(out.lower_sir) },
        CellCheck { cell: "opt", expected: row.opt, got: out.opt },
        CellCheck { cell: "upper_sdp", expected: row.upper_sdp, got: Some(out.upper_sdp) },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_well_formed() {
        for row in UNCONSTRAINED.iter().chain(DEGREE_CAPPED.iter()) {
            assert!(builtin(row.ga).is_ok(), "unknown builtin {}", row.ga);
            assert!(builtin(row.gb).is_ok(), "unknown builtin {}", row.gb);
            assert!(!row.bridge.is_empty());
            // The published chain must itself be ordered.
            assert!(row.lower_sdp <= row.lower_sir + 1e-6);
            assert!(row.lower_sir <= row.opt + 1e-6);
            assert!(row.opt <= row.upper_sdp + 1e-6);
            // Every row's problem construction must validate.
            row_problem(row).unwrap();
        }
        assert!(UNCONSTRAINED.iter().all(|r| r.max_degree.is_none()));
        assert!(DEGREE_CAPPED.iter().all(|r| r.max_degree == Some(3)));
    }

    #[test]
    fn comb_row_recomputes_with_exact_search() {
        let row = &UNCONSTRAINED[8];
        let out = run_row(row, true).unwrap();
        for check in check_row(row, &out) {
            assert_eq!(check.passed(1e-3), Some(true), "{}: {:?}", check.cell, check.got);
        }
        assert_eq!(out.bridging.as_deref(), Some("2\u{21a6}3,8"));
    }

    #[test]
    fn skipping_exact_leaves_opt_unchecked() {
        let row = &UNCONSTRAINED[0];
        let out = run_row(row, false).unwrap();
        let checks = check_row(row, &out);
        assert_eq!(checks[2].passed(1e-3), None);
        assert_eq!(checks[0].passed(1e-3), Some(true));
        assert_eq!(checks[3].passed(1e-3), Some(true));
        assert!(out.bridging.is_none());
    }
}
