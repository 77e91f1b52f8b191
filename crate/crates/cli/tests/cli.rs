use std::path::Path;
use std::process::{Command, Output};

fn g2verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn list_prints_the_catalog() {
    let out = g2verify(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 30);
    assert!(text.contains("phi-psi-contraction-identity\talgebra"));
    assert!(text.contains("appendix-squashed-nearly-parallel\tappendix"));
    let only = String::from_utf8(g2verify(&["list", "--suite", "deformation"]).stdout).unwrap();
    assert!(only.lines().all(|l| l.split('\t').nth(1) == Some("deformation")));
    assert_eq!(g2verify(&["list", "--suite", "everything"]).status.code(), Some(2));
}

#[test]
fn algebra_suite_passes_with_a_sorted_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = g2verify(&["suite", "algebra", "--points", "1", "--seed", "3", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = read_json(&path);
    assert_eq!(v["version"], 1);
    assert_eq!(v["suite"], "algebra");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["points"], 1);
    let ids: Vec<&str> = v["runs"].as_array().unwrap().iter().map(|r| r["check_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for r in v["runs"].as_array().unwrap() {
        assert_eq!(r["status"], "pass");
        assert!(r["anchor"].as_str().is_some_and(|a| !a.is_empty()));
        assert!(r.get("elapsed_ms").is_none());
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for (i, threads) in ["1", "2"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.md"));
        let out = g2verify(&[
            "suite", "appendix", "--points", "2", "--seed", "5", "--format", "md", "--parallel", threads,
            "--report", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let md = String::from_utf8(bytes.pop().unwrap()).unwrap();
    assert!(md.starts_with("# g2verify report"));
    assert!(md.contains("`appendix-squashed-volume-ratio` | pass"));
}

#[test]
fn failing_check_gives_exit_code_one() {
    let out = g2verify(&["suite", "structures", "--points", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let stated = v["runs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check_id"] == "dbstar-identity-stated")
        .unwrap();
    assert_eq!(stated["status"], "fail");
    assert!(stated["witness"]["detail"].as_str().unwrap().contains("d(b _| phi)"));
    assert!(String::from_utf8(out.stderr).unwrap().contains("FAIL dbstar-identity-stated"));
}

#[test]
fn configuration_errors_give_exit_code_two() {
    assert_eq!(g2verify(&["suite", "everything"]).status.code(), Some(2));
    assert_eq!(g2verify(&["suite", "algebra", "--points", "0"]).status.code(), Some(2));
    assert_eq!(g2verify(&["suite", "algebra", "--parallel", "0"]).status.code(), Some(2));
    assert_eq!(g2verify(&["suite", "algebra", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(g2verify(&["suite", "instanton", "--connection", "C9"]).status.code(), Some(2));
    assert_eq!(g2verify(&["suite", "algebra", "--config", "/nonexistent/g2.conf"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "points = lots\n").unwrap();
    assert_eq!(g2verify(&["suite", "algebra", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(g2verify(&[]).status.code(), Some(2));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("g2.conf");
    let report = dir.path().join("from-file.json");
    std::fs::write(
        &conf,
        format!("# defaults\npoints = 2\nseed = 11\nformat = json\nreport = {}\n", report.display()),
    )
    .unwrap();
    let out = g2verify(&["suite", "algebra", "--config", conf.to_str().unwrap(), "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = read_json(&report);
    assert_eq!(v["points"], 2);
    assert_eq!(v["seed"], 4);
}

#[test]
fn extra_instanton_pairs_and_timings() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.json");
    let out = g2verify(&[
        "suite", "instanton", "--points", "1", "--exclude-axes", "--timings", "--connection", "A0:pullback",
        "--structure", "sq", "--report", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "only the doubled intermediates fail");
    let v = read_json(&path);
    let runs = v["runs"].as_array().unwrap();
    let pair = runs.iter().find(|r| r["check_id"] == "g2-instanton:A0:pullback@sq").unwrap();
    assert_eq!(pair["status"], "pass");
    assert!(runs.iter().all(|r| r["elapsed_ms"].is_u64()));
    let failed: Vec<&str> = runs
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| r["check_id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["a0-curvature-printed-intermediates"]);
}
