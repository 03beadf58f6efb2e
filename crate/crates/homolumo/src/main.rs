//! Command-line surface: spectral gaps, bridgeable subsets, optimal-bridge
//! search with bounds, and benchmark-table reproduction.
//!
//! Exit codes: 0 success; 1 a reproduced table cell missed its published
//! value; 2 parse or usage error; 3 internal fault; 4 a graph is singular
//! or a subset is not arbitrarily bridgeable; 5 the constraints admit no
//! bridge at all; 6 the enumeration budget was exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use homolumo::bridging::{
    bridge, enumerate_bridgeable_subsets, BridgeProblem, BridgingError, ConstraintSet,
};
use homolumo::graph::{builtin, dot_export, parse_graph, Graph, GraphError};
use homolumo::optimizer::{
    bounds_report, enumerate_opt_gap, exact_opt_gap, lower_bound, upper_bound_sdp,
    BridgeSolution, OmegaMode, OptimizerError,
};
use homolumo::report::{RunReport, SolutionView};
use homolumo::spectral::{gap_via_inverse_sdp, homo_lumo_gap, SpectralError};
use homolumo::tables::{check_row, run_row, TableRow, DEGREE_CAPPED, UNCONSTRAINED};

#[derive(Parser)]
#[command(
    name = "homolumo",
    version,
    about = "Spectral gaps of graphs and gap-maximizing bridge construction",
    after_help = "GRAPH arguments accept a builtin name (P(n), C(n), K2, F0, F1, COMB(k)), \
                  a path to a JSON graph file, or inline JSON like '{\"n\":2,\"edges\":[[1,2]]}'."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the spectral gap (smallest positive minus largest negative
    /// adjacency eigenvalue; 0 for singular graphs).
    Gap {
        /// Graph: builtin name, file path, or inline JSON.
        graph: String,
        /// Cross-check the gap through the inverse-matrix semidefinite
        /// route (requires an invertible graph).
        #[arg(long)]
        via_sdp: bool,
        /// Write a JSON report to this path ("-" for stdout).
        #[arg(long)]
        json: Option<String>,
    },
    /// List the arbitrarily bridgeable k-subsets of an invertible graph.
    Bridgeable {
        /// Graph: builtin name, file path, or inline JSON.
        graph: String,
        /// Subset size.
        k: usize,
        /// Write a JSON report to this path ("-" for stdout).
        #[arg(long)]
        json: Option<String>,
    },
    /// Find the 0/1 bridge between two graphs maximizing the spectral gap,
    /// or compute bounds on it.
    Optimize {
        /// First graph (the target being extended).
        ga: String,
        /// Second graph (bridged over its listed vertices).
        gb: String,
        /// Bridge vertices of the second graph, comma-separated, 1-based.
        #[arg(long, value_delimiter = ',', required = true)]
        bridge: Vec<usize>,
        /// What to compute.
        #[arg(long, value_enum, default_value_t = Mode::All)]
        mode: Mode,
        /// Cap on the total vertex degree of the bridged graph.
        #[arg(long)]
        max_degree: Option<usize>,
        /// Per-vertex bridge-edge bounds for the first graph: one item per
        /// vertex, comma-separated; each item "-", "lo:hi", "lo:", ":hi",
        /// or an exact count "x".
        #[arg(long)]
        row_bounds: Option<String>,
        /// Per-bridge-vertex bounds for the second graph, same item syntax,
        /// in the order the bridge vertices were declared.
        #[arg(long)]
        col_bounds: Option<String>,
        /// Write the bridged graph as DOT (bridge edges dashed). Requires a
        /// mode that finds an optimal bridge.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write a JSON report to this path ("-" for stdout).
        #[arg(long)]
        json: Option<String>,
    },
    /// Recompute a published benchmark table and compare every cell.
    Reproduce {
        /// Table number: 1 (unconstrained) or 2 (max degree 3).
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
        /// Also run exact searches marked too heavy for the default budget.
        #[arg(long)]
        full: bool,
        /// Write a JSON report to this path ("-" for stdout).
        #[arg(long)]
        json: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Exact optimum by branch-and-bound.
    Exact,
    /// Exact optimum by exhaustive enumeration (refuses > 22 free entries).
    Oracle,
    /// Continuous-relaxation upper bound.
    UpperSdp,
    /// Closed-form lower bound at the exact binary coupling-norm minimum.
    LowerSdp,
    /// Closed-form lower bound at the box-relaxed coupling-norm minimum.
    LowerSir,
    /// Everything: bounds, exact optimum, and the certified bridge.
    All,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

type CliResult<T> = Result<T, Failure>;

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Linalg(inner) => Failure::new(3, inner.to_string()),
            other => Failure::new(2, other.to_string()),
        }
    }
}

impl From<BridgingError> for Failure {
    fn from(e: BridgingError) -> Self {
        match e {
            BridgingError::NotInvertible(_) | BridgingError::NotBridgeable { .. } => {
                Failure::new(4, e.to_string())
            }
            BridgingError::InvalidSubset(_) | BridgingError::Dimension(_) => {
                Failure::new(2, e.to_string())
            }
            BridgingError::Graph(inner) => inner.into(),
            BridgingError::Linalg(inner) => Failure::new(3, inner.to_string()),
        }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::NotInvertible(_) => Failure::new(4, e.to_string()),
            SpectralError::EmptyGraph => Failure::new(2, e.to_string()),
            SpectralError::Graph(inner) => inner.into(),
            other => Failure::new(3, other.to_string()),
        }
    }
}

impl From<OptimizerError> for Failure {
    fn from(e: OptimizerError) -> Self {
        match e {
            OptimizerError::Infeasible(_) => Failure::new(5, e.to_string()),
            OptimizerError::BudgetExceeded { .. } => Failure::new(6, e.to_string()),
            _ => Failure::new(3, e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let echo = echo.join(" ");
    match cli.cmd {
        Cmd::Gap { graph, via_sdp, json } => cmd_gap(&graph, via_sdp, json.as_deref(), &echo),
        Cmd::Bridgeable { graph, k, json } => cmd_bridgeable(&graph, k, json.as_deref(), &echo),
        Cmd::Optimize {
            ga,
            gb,
            bridge,
            mode,
            max_degree,
            row_bounds,
            col_bounds,
            dot,
            json,
        } => cmd_optimize(
            &ga,
            &gb,
            bridge,
            mode,
            max_degree,
            row_bounds.as_deref(),
            col_bounds.as_deref(),
            dot.as_deref(),
            json.as_deref(),
            &echo,
        ),
        Cmd::Reproduce { table, full, json } => cmd_reproduce(table, full, json.as_deref(), &echo),
    }
}

/// Formats to 6 significant digits, the precision of the published tables.
fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.5}", 0.0);
    }
    let p = (5 - x.abs().log10().floor() as i64).max(0) as usize;
    format!("{x:.p$}")
}

fn join_sig6(values: &[f64]) -> String {
    values.iter().map(|v| sig6(*v)).collect::<Vec<_>>().join(" ")
}

/// Loads a graph from inline JSON, a file path, or a builtin name.
fn load_graph(src: &str) -> CliResult<Graph> {
    let t = src.trim();
    if t.starts_with('{') {
        return Ok(parse_graph(t)?);
    }
    let path = Path::new(t);
    if path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::new(2, format!("cannot read {t}: {e}")))?;
        return Ok(parse_graph(&text)?);
    }
    if t.contains('/') || t.contains('\\') || t.ends_with(".json") {
        return Err(Failure::new(2, format!("graph file not found: {t}")));
    }
    Ok(builtin(t)?)
}

fn describe_graph(src: &str, g: &Graph) -> serde_json::Value {
    serde_json::json!({
        "source": src,
        "name": g.name(),
        "n": g.n(),
        "edges": g.edges().len(),
    })
}

fn emit_json(target: Option<&str>, report: &RunReport) -> CliResult<()> {
    let Some(target) = target else { return Ok(()) };
    let text = report.to_json();
    if target == "-" {
        println!("{text}");
        Ok(())
    } else {
        fs::write(target, text + "\n")
            .map_err(|e| Failure::new(2, format!("cannot write {target}: {e}")))
    }
}

fn cmd_gap(graph_src: &str, via_sdp: bool, json: Option<&str>, echo: &str) -> CliResult<()> {
    let g = load_graph(graph_src)?;
    let t0 = Instant::now();
    let r = homo_lumo_gap(&g)?;
    let elapsed = t0.elapsed().as_secs_f64();
    println!(
        "graph: {} ({} vertices, {} edges)",
        g.name().unwrap_or("unnamed"),
        g.n(),
        g.edges().len()
    );
    println!("invertible: {}", r.invertible);
    println!("lambda_plus: {}", sig6(r.lambda_plus));
    println!("lambda_minus: {}", sig6(r.lambda_minus));
    println!("gap: {}", sig6(r.gap));
    println!("spectrum: {}", join_sig6(&r.spectrum));

    let mut report = RunReport::new(echo);
    report.instance = describe_graph(graph_src, &g);
    report.result = serde_json::to_value(&r)
        .map_err(|e| Failure::new(3, format!("report serialization: {e}")))?;
    report.timings.insert("gap".into(), elapsed);

    if via_sdp {
        let t1 = Instant::now();
        let s = gap_via_inverse_sdp(&g)?;
        report.timings.insert("gap_via_sdp".into(), t1.elapsed().as_secs_f64());
        let diff = (s.gap - r.gap).abs();
        println!("gap_via_sdp: {} (difference {diff:.1e})", sig6(s.gap));
        if diff > 1e-6 {
            return Err(Failure::new(
                3,
                format!("eigenvalue and SDP routes disagree: {} vs {}", r.gap, s.gap),
            ));
        }
        report.result["gap_via_sdp"] = serde_json::json!(s.gap);
    }
    emit_json(json, &report)
}

fn cmd_bridgeable(graph_src: &str, k: usize, json: Option<&str>, echo: &str) -> CliResult<()> {
    let g = load_graph(graph_src)?;
    let subsets = enumerate_bridgeable_subsets(&g, k)?;
    println!(
        "graph: {} ({} vertices, {} edges)",
        g.name().unwrap_or("unnamed"),
        g.n(),
        g.edges().len()
    );
    let rendered: Vec<String> = subsets
        .iter()
        .map(|s| {
            let inner = s.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            format!("{{{inner}}}")
        })
        .collect();
    println!("arbitrarily bridgeable {k}-subsets ({}): {}", subsets.len(), rendered.join(" "));

    let mut report = RunReport::new(echo);
    report.instance = describe_graph(graph_src, &g);
    report.result = serde_json::json!({ "k": k, "subsets": subsets });
    emit_json(json, &report)
}

fn parse_bounds(
    spec: &str,
    expected: usize,
    cap: usize,
    flag: &str,
) -> CliResult<Vec<(usize, usize)>> {
    let items: Vec<&str> = spec.split(',').collect();
    if items.len() != expected {
        return Err(Failure::new(
            2,
            format!("--{flag} needs {expected} comma-separated items, got {}", items.len()),
        ));
    }
    let mut out = Vec::with_capacity(expected);
    for (idx, raw) in items.iter().enumerate() {
        let item = raw.trim();
        let num = |s: &str| {
            s.parse::<usize>().map_err(|_| {
                Failure::new(2, format!("--{flag} item {} ('{item}'): not a count", idx + 1))
            })
        };
        let pair = if item == "-" {
            (0, cap)
        } else if let Some((lo, hi)) = item.split_once(':') {
            let lo = if lo.is_empty() { 0 } else { num(lo)? };
            let hi = if hi.is_empty() { cap } else { num(hi)? };
            (lo, hi)
        } else {
            let x = num(item)?;
            (x, x)
        };
        out.push(pair);
    }
    Ok(out)
}

fn print_solution(sol: &BridgeSolution) {
    println!("optimal gap: {}", sig6(sol.gap));
    println!("mu: {}  eta: {}", sig6(sol.mu), sig6(sol.eta));
    println!("bridging: {}", sol.bridge.notation());
    let edges: Vec<String> =
        sol.bridge.pairs().iter().map(|(i, j)| format!("({i},{j})")).collect();
    println!("bridge edges (first graph vertex, second graph vertex): {}", edges.join(" "));
    println!("bridged spectrum: {}", join_sig6(&sol.spectrum));
    println!("nodes explored: {}", sol.nodes_explored);
    println!("search time: {:.2}s", sol.wall_time);
}

fn write_dot(
    dot: Option<&Path>,
    problem: &BridgeProblem,
    sol: Option<&BridgeSolution>,
) -> CliResult<()> {
    let Some(path) = dot else { return Ok(()) };
    let Some(sol) = sol else {
        return Err(Failure::new(
            2,
            "--dot requires a mode that finds an optimal bridge (exact, oracle, or all)",
        ));
    };
    let gc = bridge(problem.ga(), problem.gb(), &sol.bridge)?;
    let n = problem.ga().n();
    let dashed: Vec<(usize, usize)> =
        sol.bridge.pairs().iter().map(|&(i, j)| (i, n + j)).collect();
    fs::write(path, dot_export(&gc, &dashed))
        .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    ga_src: &str,
    gb_src: &str,
    bridge_vertices: Vec<usize>,
    mode: Mode,
    max_degree: Option<usize>,
    row_bounds: Option<&str>,
    col_bounds: Option<&str>,
    dot: Option<&Path>,
    json: Option<&str>,
    echo: &str,
) -> CliResult<()> {
    let ga = load_graph(ga_src)?;
    let gb = load_graph(gb_src)?;
    let row_bounds = row_bounds
        .map(|s| parse_bounds(s, ga.n(), bridge_vertices.len(), "row-bounds"))
        .transpose()?;
    let col_bounds = col_bounds
        .map(|s| parse_bounds(s, bridge_vertices.len(), ga.n(), "col-bounds"))
        .transpose()?;
    let constraints = ConstraintSet { max_degree, row_bounds, col_bounds };

    let mut report = RunReport::new(echo);
    report.instance = serde_json::json!({
        "ga": describe_graph(ga_src, &ga),
        "gb": describe_graph(gb_src, &gb),
        "bridge_vertices": bridge_vertices,
        "constraints": {
            "max_degree": constraints.max_degree,
            "row_bounds": constraints.row_bounds,
            "col_bounds": constraints.col_bounds,
        },
    });

    let problem = BridgeProblem::new(ga, gb, bridge_vertices, constraints)?;
    println!(
        "bridging {} over vertices {{{}}} of {}",
        problem.ga().name().unwrap_or("first graph"),
        problem
            .bridge_vertices()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(","),
        problem.gb().name().unwrap_or("second graph"),
    );

    match mode {
        Mode::Exact | Mode::Oracle => {
            let sol = if mode == Mode::Exact {
                exact_opt_gap(&problem)?
            } else {
                enumerate_opt_gap(&problem)?
            };
            print_solution(&sol);
            report.result = serde_json::to_value(SolutionView::from(&sol))
                .map_err(|e| Failure::new(3, format!("report serialization: {e}")))?;
            report.timings.insert("search".into(), sol.wall_time);
            write_dot(dot, &problem, Some(&sol))?;
        }
        Mode::UpperSdp => {
            let t0 = Instant::now();
            let v = upper_bound_sdp(&problem)?;
            println!("upper bound (continuous relaxation): {}", sig6(v));
            report.result = serde_json::json!({ "upper_sdp": v });
            report.timings.insert("upper_sdp".into(), t0.elapsed().as_secs_f64());
            write_dot(dot, &problem, None)?;
        }
        Mode::LowerSdp | Mode::LowerSir => {
            let (omega_mode, label) = if mode == Mode::LowerSdp {
                (OmegaMode::Binary, "binary")
            } else {
                (OmegaMode::Relaxed, "box-relaxed")
            };
            let t0 = Instant::now();
            let lb = lower_bound(&problem, omega_mode)?;
            println!("lower bound ({label} coupling norm): {}", sig6(lb.value));
            println!("omega: {}", sig6(lb.omega));
            println!(
                "alpha+: {}  alpha-: {}  beta+: {}  beta-: {}",
                sig6(lb.alpha_plus),
                sig6(lb.alpha_minus),
                sig6(lb.beta_plus),
                sig6(lb.beta_minus)
            );
            report.result = serde_json::to_value(lb)
                .map_err(|e| Failure::new(3, format!("report serialization: {e}")))?;
            report.timings.insert("lower_bound".into(), t0.elapsed().as_secs_f64());
            write_dot(dot, &problem, None)?;
        }
        Mode::All => {
            let outcome = bounds_report(&problem, true)?;
            let r = &outcome.report;
            println!("lower_sdp: {}", sig6(r.lower_sdp));
            println!("lower_sir: {}", sig6(r.lower_sir));
            if let Some(opt) = r.opt {
                println!("opt: {}", sig6(opt));
            }
            println!("upper_sdp: {}", sig6(r.upper_sdp));
            println!("gap of first graph alone: {}", sig6(r.gap_of_ga));
            println!(
                "omega (binary / relaxed): {} / {}",
                sig6(r.omega_star_binary),
                sig6(r.omega_star_relaxed)
            );
            if let Some(sol) = &outcome.solution {
                print_solution(sol);
            }
            report.timings = r.timings.iter().map(|(k, v)| (k.clone(), *v)).collect();
            let solution_view = outcome.solution.as_ref().map(SolutionView::from);
            report.result = serde_json::json!({
                "bounds": r,
                "solution": solution_view,
            });
            write_dot(dot, &problem, outcome.solution.as_ref())?;
        }
    }
    emit_json(json, &report)
}

fn cmd_reproduce(table: u8, full: bool, json: Option<&str>, echo: &str) -> CliResult<()> {
    let rows: &[TableRow] = if table == 1 { &UNCONSTRAINED } else { &DEGREE_CAPPED };
    const TOL: f64 = 1e-3;
    let mut passed = 0usize;
    let mut failed = 0usize;
    let mut skipped = 0usize;
    let mut row_reports = Vec::new();

    println!("reproducing table {table} ({} rows, tolerance {TOL})", rows.len());
    for (idx, row) in rows.iter().enumerate() {
        let with_exact = full || !row.heavy_exact;
        println!(
            "row {}: {}/{} bridge {{{}}}{}",
            idx + 1,
            row.ga,
            row.gb,
            row.bridge.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
            row.max_degree.map(|d| format!(" max degree {d}")).unwrap_or_default(),
        );
        let out = run_row(row, with_exact).map_err(Failure::from)?;
        let mut cells_json = Vec::new();
        for check in check_row(row, &out) {
            let mut line = format!("  {:<9} expected {:<9}", check.cell, sig6(check.expected));
            match check.passed(TOL) {
                Some(ok) => {
                    let got = check.got.expect("checked cell has a value");
                    let _ = write!(line, " computed {:<9} {}", sig6(got), verdict(ok));
                    if ok {
                        passed += 1;
                    } else {
                        failed += 1;
                    }
                    cells_json.push(serde_json::json!({
                        "cell": check.cell,
                        "expected": check.expected,
                        "computed": got,
                        "pass": ok,
                    }));
                }
                None => {
                    line.push_str(" SKIPPED (exact search beyond default budget; use --full)");
                    skipped += 1;
                    cells_json.push(serde_json::json!({
                        "cell": check.cell,
                        "expected": check.expected,
                        "skipped": true,
                    }));
                }
            }
            println!("{line}");
        }
        if let Some(found) = &out.bridging {
            println!("  bridging: computed {found} (published {})", row.bridging);
        }
        if let (Some(cap), Some(deg)) = (row.max_degree, out.max_degree_of_optimum) {
            let ok = deg <= cap;
            println!("  max degree of optimum: {deg} (cap {cap}) {}", verdict(ok));
            if ok {
                passed += 1;
            } else {
                failed += 1;
            }
            cells_json.push(serde_json::json!({
                "cell": "max_degree",
                "expected": cap,
                "computed": deg,
                "pass": ok,
            }));
        }
        row_reports.push(serde_json::json!({
            "ga": row.ga,
            "gb": row.gb,
            "bridge": row.bridge,
            "max_degree": row.max_degree,
            "cells": cells_json,
            "bridging_computed": out.bridging,
            "bridging_published": row.bridging,
        }));
    }

    println!("summary: {passed} cells pass, {failed} fail, {skipped} skipped");
    let mut report = RunReport::new(echo);
    report.instance = serde_json::json!({ "table": table, "tolerance": TOL, "full": full });
    report.result = serde_json::json!({
        "rows": row_reports,
        "passed": passed,
        "failed": failed,
        "skipped": skipped,
    });
    if skipped > 0 {
        report.diagnostics.push(format!(
            "{skipped} exact-search cell(s) skipped as beyond the default time budget; \
             rerun with --full to compute them"
        ));
    }
    emit_json(json, &report)?;
    if failed > 0 {
        return Err(Failure::new(1, format!("{failed} cell(s) outside tolerance {TOL}")));
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
