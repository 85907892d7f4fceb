use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_iqpsim"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Writes `text` to a fresh file under the target directory.
fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_examples() {
    for (file, want) in [
        ("ifrb3.json", "IFRB"),
        ("empty.json", "IB"),
        ("general.json", "general"),
        ("grid3x3.json", "planar-two-body"),
    ] {
        assert_eq!(stdout(&["classify", s(&example(file))]).trim(), want, "{file}");
    }
    let lines = stdout(&["classify", s(&example("single_edge.json"))]);
    assert_eq!(lines.lines().collect::<Vec<_>>(), ["IB", "planar-two-body"]);
}

#[test]
fn probabilities() {
    assert_eq!(stdout(&["prob", s(&example("empty.json")), "000"]).trim(), "1.000000000000");
    assert_eq!(stdout(&["prob", s(&example("empty.json")), "010"]).trim(), "0.000000000000");
    let out = stdout(&["--verify", "prob", s(&example("single_edge.json")), "11"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("0.146446609407"));
    assert!(lines.next().unwrap().ends_with("agree"));
}

#[test]
fn partition_functions() {
    let site = temp_file("site.json", r#"{"n": 1, "gates": []}"#);
    assert_eq!(stdout(&["partition", s(&site), "0"]).trim(), "2.000000000000+0.000000000000i");
    let edge = temp_file(
        "edge_pi3.json",
        r#"{"n": 2, "gates": [{"qubits": [1, 2], "theta": "pi/3"}], "embedding": [[1], [1]]}"#,
    );
    // 2(e^{iπ/3} + e^{-iπ/3}) = 4 cos(π/3)
    assert_eq!(stdout(&["partition", s(&edge), "00"]).trim(), "2.000000000000+0.000000000000i");
}

#[test]
fn generated_grid_verifies() {
    let text = stdout(&["gen", "grid", "4x4", "--theta", "pi/8"]);
    let grid = temp_file("grid4x4.json", &text);
    assert_eq!(stdout(&["classify", s(&grid)]).trim(), "planar-two-body");
    for fields in ["0000000000000000", "1000000000000001", "0110100110010110"] {
        let out = stdout(&["--verify", "partition", s(&grid), fields]);
        assert!(out.lines().nth(1).unwrap().ends_with("agree"), "{out}");
    }
    let out = stdout(&["--verify", "marginal", s(&grid), "1,2,6", "101"]);
    assert!(out.lines().nth(1).unwrap().ends_with("agree"), "{out}");
}

#[test]
fn sampling_is_deterministic() {
    let grid = temp_file("grid2x3.json", &stdout(&["gen", "grid", "2x3"]));
    let a = stdout(&["sample", s(&grid), "--count", "20", "--seed", "5"]);
    let b = stdout(&["sample", s(&grid), "--count", "20", "--seed", "5"]);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 20);
    assert!(a.lines().all(|l| l.len() == 6 && l.chars().all(|c| c == '0' || c == '1')));

    let flat = temp_file("grid_zero.json", &stdout(&["gen", "grid", "2x2", "--theta", "0"]));
    let zeros = stdout(&["sample", s(&flat), "--count", "50", "--seed", "1"]);
    assert!(zeros.lines().all(|l| l == "0000"));
}

#[test]
fn single_edge_quarter_turn_frequencies() {
    // At θ = π/4 the outcomes 00 and 11 each occur with probability 1/2.
    let edge = temp_file(
        "edge_pi4.json",
        r#"{"n": 2, "gates": [{"qubits": [1, 2], "theta": "pi/4"}], "embedding": [[1], [1]]}"#,
    );
    let draws = 100_000;
    let out = stdout(&["sample", s(&edge), "--count", &draws.to_string(), "--seed", "11"]);
    let mut counts = [0usize; 4];
    for l in out.lines() {
        counts[usize::from_str_radix(l, 2).unwrap()] += 1;
    }
    assert_eq!(counts[1] + counts[2], 0);
    let sigma = (draws as f64 * 0.25).sqrt();
    assert!((counts[0] as f64 - draws as f64 / 2.0).abs() < 3.0 * sigma, "{counts:?}");
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(run(&["prob", "/nonexistent.json", "0"]).status.code(), Some(2));
    assert_eq!(run(&["prob", s(&example("empty.json")), "01"]).status.code(), Some(2));
    assert_eq!(run(&["prob", s(&example("empty.json")), "0x0"]).status.code(), Some(2));
    let bad = temp_file("bad.json", r#"{"n": 2, "gates": [{"qubits": [0], "theta": 1}]}"#);
    assert_eq!(run(&["classify", s(&bad)]).status.code(), Some(2));
    assert_eq!(run(&["gen", "grid", "2by2"]).status.code(), Some(2));
}

#[test]
fn selftest_and_fault_injection() {
    let out = stdout(&["selftest"]);
    assert_eq!(out.lines().last(), Some("PASS"));
    let faulty = run(&["selftest", "--inject-fault", "pfaffian-sign"]);
    assert_eq!(faulty.status.code(), Some(1));
    let text = String::from_utf8(faulty.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("FAIL") && last.contains("pfaffian"), "{last}");
}

#[test]
fn json_output() {
    let out = stdout(&["--json", "prob", s(&example("single_edge.json")), "11"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["engine"], "sparse");
    assert!((v["probability"].as_f64().unwrap() - 0.146446609406726).abs() < 1e-12);

    let out = stdout(&["--json", "classify", s(&example("ifrb3.json"))]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object());
}
