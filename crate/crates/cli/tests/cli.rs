use std::path::PathBuf;
use std::process::{Command, Output};

fn rique() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rique"))
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(cmd: &mut Command) -> (i32, String) {
    let Output { status, stdout, stderr } = cmd.output().expect("spawn");
    let mut text = String::from_utf8_lossy(&stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&stderr));
    (status.code().unwrap_or(-1), text)
}

#[test]
fn validate_accepts_two_page_k7() {
    let (code, out) = run(rique().args(["validate", &fixture("k7.graph"), &fixture("k7_two_pages.layout")]));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("valid: true"));
}

#[test]
fn validate_rejects_one_page_k5_with_witness() {
    let (code, out) = run(rique().args(["validate", &fixture("k5.graph"), &fixture("k5_one_page.layout")]));
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("valid: false"));
    assert!(out.contains("witness: <"));
}

#[test]
fn validate_json_reports_validity() {
    let (code, out) = run(rique().args(["validate", &fixture("k5.graph"), &fixture("k5_one_page.layout"), "--json"]));
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).expect("json");
    assert_eq!(v["valid"], false);
}

#[test]
fn missing_file_is_an_error() {
    let (code, out) = run(rique().args(["validate", &fixture("k5.graph"), "/definitely/missing"]));
    assert_eq!(code, 2);
    assert!(out.contains("error"));
}

#[test]
fn exact_k4_emits_a_layout_that_validates() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("k4.layout");
    let (code, out) = run(rique().args([
        "riquenumber",
        &fixture("k4.graph"),
        "--exact",
        "--out",
        out_path.to_str().unwrap(),
    ]));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("rique-number: 1"));
    let (code, out) = run(rique().args(["validate", &fixture("k4.graph"), out_path.to_str().unwrap()]));
    assert_eq!(code, 0, "{out}");
}

#[test]
fn sat_k5_needs_two_pages() {
    let (code, out) = run(rique().args(["riquenumber", &fixture("k5.graph"), "--sat"]));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("pages 1: unsat"));
    assert!(out.contains("pages 2: sat"));
    assert!(out.contains("rique-number: 2"));
}

#[test]
fn sat_through_external_solver_binary() {
    let solver = env!("CARGO_BIN_EXE_rique-sat");
    let (code, out) = run(rique().args(["riquenumber", &fixture("k5.graph"), "--sat", solver]));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("rique-number: 2"));
}

#[test]
fn rique_sat_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    for (pages, expect) in [("1", 20), ("2", 10)] {
        let cnf = dir.path().join(format!("k5_{pages}.cnf"));
        let (code, out) =
            run(rique().args(["encode", &fixture("k5.graph"), pages, "--out", cnf.to_str().unwrap()]));
        assert_eq!(code, 0, "{out}");
        let (code, out) = run(Command::new(env!("CARGO_BIN_EXE_rique-sat")).arg(&cnf));
        assert_eq!(code, expect, "{out}");
    }
}

#[test]
fn encode_prints_dimacs_header() {
    let (code, out) = run(rique().args(["encode", &fixture("k4.graph"), "1"]));
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("p cnf ")));
}

#[test]
fn onesided_in_plane_k4() {
    let (code, out) = run(rique().args(["onesided", &fixture("k4.graph"), "--embedding", &fixture("k4.rot")]));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("path: "));
}

#[test]
fn onesided_claw_has_none() {
    let (code, out) = run(rique().args(["onesided", &fixture("claw.graph")]));
    assert_eq!(code, 1);
    assert!(out.contains("none"));
}

#[test]
fn onesided_bowtie_fixed_ends() {
    let (code, _) = run(rique().args(["onesided", &fixture("bowtie.graph"), "--st", "0", "1"]));
    assert_eq!(code, 1);
    let dir = tempfile::tempdir().unwrap();
    let layout = dir.path().join("bowtie.layout");
    let (code, out) = run(rique().args([
        "onesided",
        &fixture("bowtie.graph"),
        "--st",
        "0",
        "3",
        "--out",
        layout.to_str().unwrap(),
    ]));
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("path: 0 1 2 4 3"));
    let (code, out) = run(rique().args(["validate", &fixture("bowtie.graph"), layout.to_str().unwrap()]));
    assert_eq!(code, 0, "{out}");
}

#[test]
fn bounds_for_small_complete_graphs() {
    let (_, out) = run(rique().args(["bounds", "10"]));
    assert!(out.contains("lower: 3"));
    assert!(out.contains("table: 3"));
    assert!(out.contains("upper: 4"));
    let (_, out) = run(rique().args(["bounds", "4"]));
    assert!(out.contains("lower: 1"));
    assert!(out.contains("table: 1"));
    assert!(out.contains("upper: 2"));
}

#[test]
fn construct_k11_uses_four_pages_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let layout = dir.path().join("k11.layout");
    let svg = dir.path().join("k11.svg");
    let (code, out) = run(rique().args([
        "construct-kn",
        "11",
        "--out",
        layout.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]));
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(&layout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("page ")).count(), 4);
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));

    let graph = dir.path().join("k11.graph");
    let pairs: Vec<String> = (0..11).flat_map(|a| (a + 1..11).map(move |b| format!("{a} {b}"))).collect();
    std::fs::write(&graph, format!("11\n{}\n", pairs.join(","))).unwrap();
    let (code, out) = run(rique().args(["validate", graph.to_str().unwrap(), layout.to_str().unwrap()]));
    assert_eq!(code, 0, "{out}");
}

#[test]
fn table_lists_small_complete_graphs() {
    let (code, out) = run(rique().args(["table"]));
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["5", "2", "2", "2"]));
}
