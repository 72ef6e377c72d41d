use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stacktight"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.path().join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path_str(&out)]);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn certificate(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is a certificate")
}

fn check<'a>(cert: &'a Value, name: &str) -> &'a Value {
    cert["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

const OCTAHEDRON: &str = "0 1 2\n0 2 3\n0 3 4\n0 4 1\n5 1 2\n5 2 3\n5 3 4\n5 4 1\n";

#[test]
fn generate_writes_expected_vertex_counts() {
    let dir = TempDir::new().unwrap();
    let m3 = generate(&dir, "m3.txt", &["--family", "M", "--d", "3", "--part", "boundary"]);
    let text = std::fs::read_to_string(m3).unwrap();
    let verts: std::collections::BTreeSet<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .flat_map(str::split_whitespace)
        .collect();
    assert_eq!(verts.len(), 29);

    let b = generate(&dir, "b.txt", &["--family", "bundle", "--d", "2", "--m", "7", "--sigma", "id"]);
    let o = run(&["verify", path_str(&b), "--check", "neighborly"]);
    assert_eq!(certificate(&o)["parameters"]["n"], 7);
}

#[test]
fn generate_rejects_bad_parameters() {
    for args in [
        vec!["generate", "--family", "M", "--d", "1"],
        vec!["generate", "--family", "bundle", "--d", "2"],
        vec!["generate", "--family", "bundle", "--d", "2", "--m", "7", "--sigma", "214"],
        vec!["generate", "--family", "pathball", "--d", "0", "--m", "3"],
        vec!["generate", "--family", "Q", "--d", "3"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert!(code(&o) >= 64, "{args:?} exited with {}", code(&o));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["verify", "--help"])), 0);
}

#[test]
fn full_pipeline_passes_on_m3() {
    let dir = TempDir::new().unwrap();
    let m3 = generate(&dir, "m3.txt", &["--family", "M", "--d", "3"]);
    let o = run(&["verify", path_str(&m3), "--all", "--n-cyclic", "29"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let cert = certificate(&o);
    assert_eq!(cert["schema"], 1);
    assert!(cert["subject"].as_str().unwrap().starts_with("sha256:"));
    for c in cert["checks"].as_array().unwrap() {
        assert_eq!(c["verdict"], "PASS", "{c}");
        assert!(c.get("duration_ms").is_none());
    }
    assert_eq!(check(&cert, "betti")["witness"]["betti"], serde_json::json!([1, 30, 30, 1]));
    assert_eq!(check(&cert, "orientability")["witness"]["orientable"], false);
    assert_eq!(check(&cert, "automorphism-group")["witness"]["order"], 29);
    let tn = &check(&cert, "tight-neighborly")["witness"];
    assert_eq!((tn["lhs"].as_u64(), tn["rhs"].as_u64()), (Some(300), Some(300)));
    let names: Vec<&str> = cert["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut unique = names.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), names.len());
}

#[test]
fn link_order_of_row_zero() {
    let dir = TempDir::new().unwrap();
    let m2 = generate(&dir, "m2_19.txt", &["--family", "M", "--d", "2"]);
    let expected = "1 7 3 2 11 6 18 16 4 14 8 10 15 12 13 5 9 17";
    let o = run(&["verify", path_str(&m2), "--check", "link-order", "--vertex", "0", "--expect-link", expected]);
    assert_eq!(code(&o), 0);
    assert_eq!(check(&certificate(&o), "link-order")["witness"]["matches_expected"], true);

    let wrong = "1 3 7 2 11 6 18 16 4 14 8 10 15 12 13 5 9 17";
    let o = run(&["verify", path_str(&m2), "--check", "link-order", "--vertex", "0", "--expect-link", wrong]);
    assert_eq!(code(&o), 1);
}

#[test]
fn octahedron_tightness_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let oct = write(&dir, "octahedron.txt", OCTAHEDRON);
    let o = run(&["verify", path_str(&oct), "--check", "tight"]);
    assert_eq!(code(&o), 2);
    assert_eq!(check(&certificate(&o), "tightness")["verdict"], "INCONCLUSIVE");
}

#[test]
fn failing_check_exits_one() {
    let dir = TempDir::new().unwrap();
    let oct = write(&dir, "octahedron.txt", OCTAHEDRON);
    let o = run(&["verify", path_str(&oct), "--check", "neighborly"]);
    assert_eq!(code(&o), 1);
    let cert = certificate(&o);
    assert_eq!(check(&cert, "neighborly")["witness"]["missing_edges"]["total"], 3);
}

#[test]
fn parse_errors_report_the_line() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "# header\n0 1 2\n0 2 -3\n");
    let o = run(&["verify", path_str(&bad), "--all"]);
    assert!(code(&o) >= 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let o = run(&["verify", path_str(&dir.path().join("absent.txt")), "--all"]);
    assert!(code(&o) >= 64);
}

#[test]
fn missing_check_inputs_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let oct = write(&dir, "octahedron.txt", OCTAHEDRON);
    for extra in [&["--check", "cyclic-action"][..], &["--check", "link-order"], &[]] {
        let mut args = vec!["verify", path_str(&oct)];
        args.extend_from_slice(extra);
        assert_eq!(code(&run(&args)), 64, "{extra:?}");
    }
}

#[test]
fn certificates_are_deterministic_across_jobs() {
    let dir = TempDir::new().unwrap();
    let n3 = generate(&dir, "n3.txt", &["--family", "N", "--d", "3"]);
    let args = |jobs: &'static str| {
        vec!["verify", path_str(&n3), "--all", "--n-cyclic", "29", "--check", "spotcheck", "--samples", "50", "--seed", "9", "--jobs", jobs]
            .into_iter()
            .map(str::to_owned)
            .collect::<Vec<_>>()
    };
    let a = bin().args(args("1")).output().unwrap();
    let b = bin().args(args("4")).output().unwrap();
    let c = bin().args(args("4")).output().unwrap();
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
}

#[test]
fn timings_are_opt_in() {
    let dir = TempDir::new().unwrap();
    let oct = write(&dir, "octahedron.txt", OCTAHEDRON);
    let o = run(&["verify", path_str(&oct), "--check", "betti", "--timings"]);
    assert!(check(&certificate(&o), "betti")["duration_ms"].is_u64());
}

#[test]
fn json_flag_writes_file_and_summarises() {
    let dir = TempDir::new().unwrap();
    let oct = write(&dir, "octahedron.txt", OCTAHEDRON);
    let out = dir.path().join("cert.json");
    let o = run(&["verify", path_str(&oct), "--check", "betti", "--check", "orientability", "--json", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("PASS") && stdout.contains("overall"));
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(check(&cert, "betti")["witness"]["betti"], serde_json::json!([1, 0, 1]));
}

#[test]
fn replay_stops_after_one_step() {
    let o = run(&["replay", "--stop-after", "1"]);
    assert_eq!(code(&o), 0);
    let cert = certificate(&o);
    assert_eq!(check(&cert, "step-01")["witness"]["vertices_after"], 145);
    assert_eq!(check(&cert, "result-in-walkup-k")["verdict"], "PASS");
    assert!(cert["checks"].as_array().unwrap().iter().all(|c| c["name"] != "final-isomorphism"));
}

#[test]
fn full_replay_reaches_m3() {
    let o = run(&["replay"]);
    assert_eq!(code(&o), 0);
    let cert = certificate(&o);
    assert_eq!(check(&cert, "final-isomorphism")["verdict"], "PASS");
    assert_eq!(cert["checks"].as_array().unwrap().iter().filter(|c| c["name"].as_str().unwrap().starts_with("step-")).count(), 30);

    let n = certificate(&run(&["replay", "--family", "N"]));
    assert_eq!(n["parameters"]["experimental"], true);
}

#[test]
fn table_recomputes_family_rows() {
    let o = run(&["table", "--json"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    let find = |name: &str| rows.iter().find(|r| r["complex"] == name).unwrap().clone();
    let m4 = find("M^4_41");
    assert_eq!((m4["beta1"].as_str(), m4["orientation"].as_str()), (Some("42"), Some("orientable")));
    let m3 = find("M^3_29");
    assert_eq!((m3["beta1"].as_str(), m3["orientation"].as_str()), (Some("30"), Some("non-orientable")));
    assert_eq!(find("M^4_15")["status"], "out of scope: external data");
    assert_eq!(find("S^3_5")["beta1"], "0");

    let text = String::from_utf8(run(&["table"]).stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("N^4_41") && l.contains("orientable")));
}
