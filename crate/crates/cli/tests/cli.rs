//! End-to-end checks of the binary: exit-code contract, determinism, and
//! the fault-injection requirement that exit 1 carries a genuine witness.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twincut"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_g3_graph6_line() {
    let out = run(&["generate", "3", "--format", "graph6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "DMg");
}

#[test]
fn check_k2_passes() {
    let out = run(&["check", "2"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("all checks passed"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["generate", "4", "--format", "json"],
        vec!["sample-decompose", "3", "--count", "20"],
        vec!["tree", "4"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["chi"]).status.code(), Some(2));
    // infeasible k is an input error, not a violation
    assert_eq!(run(&["generate", "7"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g4.json");
    assert!(bin()
        .args(["generate", "4", "--format", "json", "-o"])
        .arg(&path)
        .status()
        .unwrap()
        .success());
    let out = bin()
        .args(["chi", "--max-nodes", "1"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
    assert!(stdout(&out).contains("unknown within budget"));
}

/// Fault injection: add one triangle-closing edge to G_4 and confirm the
/// battery fails with a triangle witness and exit code 1.
#[test]
fn mutated_g4_fails_check_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g4.json");
    assert!(bin()
        .args(["generate", "4", "--format", "json", "-o"])
        .arg(&path)
        .status()
        .unwrap()
        .success());
    let mut parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let edges: Vec<(u64, u64)> = parsed["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap()))
        .collect();
    let has = |u: u64, v: u64| edges.contains(&(u.min(v), u.max(v)));
    // find a path u - v - w with u, w non-adjacent; (u, w) closes a triangle
    let (u, w) = edges
        .iter()
        .find_map(|&(a, b)| {
            edges.iter().find_map(|&(c, d)| {
                for (x, y) in [(a, b), (b, a)] {
                    for (p, q) in [(c, d), (d, c)] {
                        if y == p && x != q && !has(x, q) {
                            return Some((x, q));
                        }
                    }
                }
                None
            })
        })
        .expect("G_4 has an induced path");
    parsed["edges"]
        .as_array_mut()
        .unwrap()
        .push(serde_json::json!([u.min(w), u.max(w)]));
    let mutated = dir.path().join("mutated.json");
    std::fs::write(&mutated, serde_json::to_string(&parsed).unwrap()).unwrap();

    let out = bin()
        .args(["check", "4", "--input"])
        .arg(&mutated)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(
        text.contains("[FAIL] triangle-free") || text.contains("[FAIL] chromatic-number"),
        "no witness in:\n{text}"
    );
}

#[test]
fn corrupted_certificate_rejected_with_step_record() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("c3.json");
    assert!(bin()
        .args(["certify", "3", "-o"])
        .arg(&cert_path)
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .args(["certify", "--check"])
        .arg(&cert_path)
        .status()
        .unwrap()
        .success());

    let mut cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    // corrupt the first substitute step to reference a missing vertex
    let steps = cert["steps"].as_array_mut().unwrap();
    let idx = steps
        .iter()
        .position(|s| s["op"] == "substitute")
        .expect("certificate has a substitute step");
    steps[idx]["vertex"] = serde_json::json!(9999);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&cert).unwrap()).unwrap();

    let out = bin().args(["certify", "--check"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["violation"], "invalid-certificate");
    assert_eq!(record["step"], idx);
}

#[test]
fn verify_coloring_round_trip_and_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g4.json");
    let wit = dir.path().join("wit.json");
    assert!(bin()
        .args(["generate", "4", "--format", "json", "-o"])
        .arg(&g)
        .status()
        .unwrap()
        .success());
    let out = bin().args(["chi"]).arg(&g).args(["-o"]).arg(&wit).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("chi = 4"));

    let ok = bin().args(["verify-coloring"]).arg(&g).arg(&wit).output().unwrap();
    assert!(ok.status.success());

    // constant coloring must be rejected with the offending edge
    let mut parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&wit).unwrap()).unwrap();
    for (_, v) in parsed["assignment"].as_object_mut().unwrap().iter_mut() {
        *v = serde_json::json!(1);
    }
    std::fs::write(&wit, serde_json::to_string(&parsed).unwrap()).unwrap();
    let bad = bin().args(["verify-coloring"]).arg(&g).arg(&wit).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("improper-coloring"));
}

#[test]
fn sidecar_lists_addresses() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g3.g6");
    assert!(bin().args(["generate", "3", "-o"]).arg(&g).status().unwrap().success());
    let sidecar: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(Path::new(&format!("{}.labels.json", g.display()))).unwrap(),
    )
    .unwrap();
    let labels = sidecar["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 5);
    assert_eq!(labels[0], "t");
}
