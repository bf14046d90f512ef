use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_delpezzo"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn weyl_table_has_25_rows() {
    let o = run(&["weyl-table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit()))
        .collect();
    assert_eq!(rows.len(), 26, "{text}");
    let identity: Vec<&str> = rows[0].split_whitespace().collect();
    assert_eq!(&identity[..4], ["1", "1", "7", "1"]);
    assert!(text.contains("every H^1 order is a square: yes"));
}

#[test]
fn malformed_record_exits_1_naming_the_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "kind = \"cubic\"\np = 2\n[[coeffs]]\nexps = [3, 0, 0, 0]\nvalue = [1]\n[[coeffs]]\nexps = [0, 2, 0]\nvalue = [1]\n")
        .unwrap();
    let o = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("record 1"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn singular_surface_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cone.toml");
    let mut text = String::from("kind = \"cubic\"\np = 2\n");
    for e in ["[3, 0, 0, 0]", "[0, 3, 0, 0]", "[0, 0, 3, 0]"] {
        text.push_str(&format!("[[coeffs]]\nexps = {e}\nvalue = [1]\n"));
    }
    std::fs::write(&path, text).unwrap();
    let o = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("smoothness failed"), "{}", stderr(&o));
}

#[test]
fn small_cap_exits_2() {
    let o = run(&[
        "analyze",
        fixture("rational_f2.toml").to_str().unwrap(),
        "--extension-cap",
        "16",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lines failed"), "{}", stderr(&o));
}

#[test]
fn analyze_json_is_versioned_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "2"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let o = bin()
            .env("DELPEZZO_THREADS", threads)
            .args([
                "analyze",
                fixture("rational_f2.toml").to_str().unwrap(),
                "--json",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outputs.push((stdout(&o), std::fs::read_to_string(&path).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let v: serde_json::Value = serde_json::from_str(&outputs[0].1).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "cubic");
    assert_eq!(v["picard"]["trace"], -1);
    assert_eq!(v["lines"]["minimal"], false);
}

#[test]
fn param_reports_the_parameterization() {
    let o = run(&["param", fixture("minimal_f2.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("admissible line found"));
}

#[test]
fn dp4_report_names_the_case() {
    let o = run(&["analyze", fixture("dp4_f3.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("case: II"));
}

#[test]
fn certification_passes_the_quick_criteria() {
    let o = run(&["paper-check", "--criteria", "1,2,3,4,7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("criterion 7: PASS"));
}

#[test]
fn certification_fails_on_a_mutated_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("minimal.toml");
    let text = std::fs::read_to_string(fixture("minimal_f2.toml")).unwrap();
    // drop X W^2: the surface is still a cubic but no longer the bundled one
    let mutated = text.replace(
        "exps = [1, 0, 0, 2]\nvalue = [1]",
        "exps = [1, 0, 0, 2]\nvalue = [0]",
    );
    assert_ne!(mutated, text);
    std::fs::write(&path, mutated).unwrap();
    let arg = format!("minimal-f2={}", path.display());
    let o = run(&["paper-check", "--criteria", "1,2,3", "--fixture", &arg]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FAIL"), "{}", stdout(&o));
}

#[test]
fn scan_is_deterministic_across_thread_counts() {
    let mut outs = Vec::new();
    for threads in ["1", "3"] {
        let o = bin()
            .env("DELPEZZO_THREADS", threads)
            .args([
                "scan", "--kind", "cubic", "--p", "2", "--count", "12", "--seed", "7",
            ])
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        outs.push(stdout(&o));
    }
    assert_eq!(outs[0], outs[1]);
    assert!(outs[0].contains("violations: none"));
}
