//! End-to-end checks of the command-line binary: output contents, exit
//! codes for every failure class, and the JSON report schema.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_homolumo"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

#[test]
fn gap_of_builtin_fulvene() {
    let (code, out, _) = run(&["gap", "F0"]);
    assert_eq!(code, 0);
    assert!(out.contains("invertible: true"));
    assert!(out.contains("gap: 0.872136"));
    assert!(out.contains("lambda_plus: 0.618034"));
    assert!(out.contains("lambda_minus: -0.254102"));
}

#[test]
fn gap_of_singular_graph_is_zero_and_succeeds() {
    let (code, out, _) = run(&["gap", "P(3)"]);
    assert_eq!(code, 0);
    assert!(out.contains("invertible: false"));
    assert!(out.contains("gap: 0.00000"));
}

#[test]
fn gap_cross_checked_through_the_sdp_route() {
    let (code, out, _) = run(&["gap", "F0", "--via-sdp"]);
    assert_eq!(code, 0);
    assert!(out.contains("gap_via_sdp: 0.872136"));
}

#[test]
fn sdp_route_refuses_singular_graphs() {
    let (code, _, err) = run(&["gap", "P(3)", "--via-sdp"]);
    assert_eq!(code, 4);
    assert!(err.contains("error:"));
}

#[test]
fn gap_accepts_inline_json() {
    let (code, out, _) = run(&["gap", r#"{"n":2,"edges":[[1,2]]}"#]);
    assert_eq!(code, 0);
    assert!(out.contains("gap: 2.00000"));
}

#[test]
fn gap_accepts_a_graph_file() {
    let dir = std::env::temp_dir().join("homolumo-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.json");
    std::fs::write(&path, r#"{"n":4,"edges":[[1,2],[2,3],[3,4],[4,1]],"name":"C4"}"#).unwrap();
    let (code, out, _) = run(&["gap", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("C4"));
    assert!(out.contains("invertible: false"));
}

#[test]
fn missing_graph_file_is_a_usage_error() {
    let (code, _, err) = run(&["gap", "/no/such/dir/graph.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("not found"));
}

#[test]
fn malformed_inline_json_is_a_usage_error() {
    let (code, _, _) = run(&["gap", r#"{"n":2,"edges":[[1,2]"#]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_builtin_is_a_usage_error() {
    let (code, _, _) = run(&["gap", "Q9"]);
    assert_eq!(code, 2);
}

#[test]
fn self_loop_is_a_usage_error() {
    let (code, _, _) = run(&["gap", r#"{"n":2,"edges":[[1,1]]}"#]);
    assert_eq!(code, 2);
}

#[test]
fn json_report_round_trips_with_schema_version() {
    let (code, out, _) = run(&["gap", "F0", "--json", "-"]);
    assert_eq!(code, 0);
    let json_start = out.find('{').expect("report on stdout");
    let v: serde_json::Value = serde_json::from_str(&out[json_start..]).expect("valid JSON");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["tool"], "homolumo");
    assert!((v["result"]["gap"].as_f64().unwrap() - 0.8721357).abs() < 1e-6);
    assert_eq!(v["result"]["spectrum"].as_array().unwrap().len(), 6);
}

#[test]
fn bridgeable_lists_subsets() {
    let (code, out, _) = run(&["bridgeable", "F0", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("{1,2}"));
    assert!(out.contains("{4,5}"));
    assert!(out.contains("(7)"));
}

#[test]
fn bridgeable_refuses_singular_graphs() {
    let (code, _, _) = run(&["bridgeable", "P(3)", "1"]);
    assert_eq!(code, 4);
}

#[test]
fn optimize_oracle_solves_single_edge_pair() {
    let (code, out, _) = run(&["optimize", "K2", "K2", "--bridge", "1", "--mode", "oracle"]);
    assert_eq!(code, 0);
    assert!(out.contains("optimal gap: 1.31111"));
    assert!(out.contains("bridging: 1↦1,2"));
}

#[test]
fn optimize_all_mode_reports_the_bound_chain() {
    let (code, out, _) = run(&["optimize", "K2", "K2", "--bridge", "1", "--mode", "all"]);
    assert_eq!(code, 0);
    assert!(out.contains("lower_sdp: 0.763932"));
    assert!(out.contains("lower_sir: 1.00000"));
    assert!(out.contains("opt: 1.31111"));
    assert!(out.contains("upper_sdp: 1.67597"));
}

#[test]
fn optimize_bound_modes_print_certificates() {
    let (code, out, _) = run(&["optimize", "K2", "K2", "--bridge", "1", "--mode", "lower-sdp"]);
    assert_eq!(code, 0);
    assert!(out.contains("omega: 1.00000"));
    let (code, out, _) = run(&["optimize", "K2", "K2", "--bridge", "1", "--mode", "lower-sir"]);
    assert_eq!(code, 0);
    assert!(out.contains("omega: 0.500000"));
    let (code, out, _) = run(&["optimize", "K2", "K2", "--bridge", "1", "--mode", "upper-sdp"]);
    assert_eq!(code, 0);
    assert!(out.contains("upper bound"));
}

#[test]
fn optimize_refuses_non_bridgeable_subsets() {
    // Vertex 6 (the pendant) of the fulvene does not support arbitrary
    // bridging on its own.
    let (code, _, err) = run(&["optimize", "K2", "F0", "--bridge", "6"]);
    assert_eq!(code, 4);
    assert!(err.contains("error:"));
}

#[test]
fn optimize_refuses_singular_partners() {
    let (code, _, _) = run(&["optimize", "K2", "P(3)", "--bridge", "1"]);
    assert_eq!(code, 4);
}

#[test]
fn optimize_rejects_out_of_range_bridge_vertices() {
    let (code, _, _) = run(&["optimize", "K2", "K2", "--bridge", "7"]);
    assert_eq!(code, 2);
}

#[test]
fn oracle_mode_enforces_the_enumeration_budget() {
    let (code, _, err) =
        run(&["optimize", "P(12)", "P(4)", "--bridge", "1,3", "--mode", "oracle"]);
    assert_eq!(code, 6);
    assert!(err.contains("24"));
}

#[test]
fn saturating_degree_caps_are_infeasible() {
    let (code, _, _) =
        run(&["optimize", "K2", "K2", "--bridge", "1", "--max-degree", "1", "--mode", "exact"]);
    assert_eq!(code, 5);
}

#[test]
fn row_bounds_shape_the_optimum() {
    // Forbid vertex 1 of the first K2 from receiving bridge edges; the
    // optimum over the remaining patterns is the single edge 2-1.
    let (code, out, _) = run(&[
        "optimize", "K2", "K2", "--bridge", "1", "--mode", "exact", "--row-bounds", "0,-",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("bridge edges (first graph vertex, second graph vertex): (2,1)"));
    let (code, _, _) = run(&["optimize", "K2", "K2", "--bridge", "1", "--row-bounds", "0"]);
    assert_eq!(code, 2, "bounds item count must match the vertex count");
    let (code, _, _) = run(&["optimize", "K2", "K2", "--bridge", "1", "--row-bounds", "x,-"]);
    assert_eq!(code, 2);
}

#[test]
fn dot_export_marks_bridge_edges_dashed() {
    let dir = std::env::temp_dir().join("homolumo-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bridged.dot");
    let (code, _, _) = run(&[
        "optimize", "K2", "K2", "--bridge", "1", "--mode", "exact",
        "--dot", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("graph"));
    assert!(dot.contains("style=dashed"));
    // K2 against K2 over vertex 1: optimum keeps both its own edges plus
    // two bridge edges into vertex 3 (= second-graph vertex 1).
    assert!(dot.contains("1 -- 3"));
}

#[test]
fn dot_requires_a_solving_mode() {
    let (code, _, err) = run(&[
        "optimize", "K2", "K2", "--bridge", "1", "--mode", "upper-sdp", "--dot", "/tmp/x.dot",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("--dot"));
}

#[test]
fn reproduce_rejects_unknown_tables() {
    let (code, _, _) = run(&["reproduce", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn optimize_json_report_carries_solution_and_bounds() {
    let (code, out, _) =
        run(&["optimize", "K2", "K2", "--bridge", "1", "--mode", "all", "--json", "-"]);
    assert_eq!(code, 0);
    let json_start = out.find("{\n").expect("report on stdout");
    let v: serde_json::Value = serde_json::from_str(&out[json_start..]).expect("valid JSON");
    assert_eq!(v["schema_version"], 1);
    let bounds = &v["result"]["bounds"];
    assert!((bounds["opt"].as_f64().unwrap() - 1.311108).abs() < 1e-5);
    assert!(bounds["lower_sdp"].as_f64().unwrap() <= bounds["upper_sdp"].as_f64().unwrap());
    assert_eq!(v["result"]["solution"]["bridging"], "1↦1,2");
}
