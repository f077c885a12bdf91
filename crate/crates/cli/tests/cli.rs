use std::collections::BTreeSet;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twisted-qp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn corollary_passes_with_exit_zero() {
    let o = run(&["verify", "--check", "corollary", "--series", "A", "--rank", "2", "--qmax", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("[pass]"));
}

#[test]
fn negative_control_exits_one_with_witness() {
    let o = run(&[
        "verify", "--check", "corollary-all-roots", "--series", "A", "--rank", "2", "--qmax", "2", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "fail");
    assert_eq!(v["witness"]["q"], "1/2");
    assert_eq!(v["witness"]["y"], serde_json::json!(["1", "0"]));
    assert_eq!((v["witness"]["lhs"].as_str(), v["witness"]["rhs"].as_str()), (Some("2"), Some("1")));
}

#[test]
fn usage_errors_exit_two_with_one_line() {
    for args in [
        vec!["char", "--object", "std", "--series", "A", "--rank", "2", "--qmax", "0.5"],
        vec!["frobnicate"],
        vec!["datum", "--series", "A", "--rank", "1"],
        vec!["char", "--object", "psp-std", "--series", "A", "--rank", "2", "--qmax", "1/0"],
        vec!["char", "--object", "psp-std", "--series", "A", "--rank", "2", "--k0", "0", "--kj", "0", "--qmax", "1"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr(&o).trim_end().lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn datum_reports_mu() {
    let o = run(&["datum", "--series", "D", "--rank", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mu = (1, 1/2)"));
    let o = run(&["datum", "--series", "D", "--rank", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["mu"], serde_json::json!(["1", "1/2"]));
}

#[test]
fn para_json_leading_terms() {
    let o = run(&[
        "char", "--object", "para", "--series", "A", "--rank", "3", "--k0", "0", "--kj", "2", "--qmax", "2", "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms[0]["q"], "0");
    assert_eq!(terms[0]["c"], "1");
    assert_eq!(terms[1]["q"], "1/4");
    assert_eq!(terms[1]["c"], "6");
    assert_eq!(terms[2]["q"], "1/2");
    for t in terms {
        let q = t["q"].as_str().unwrap();
        assert!(!q.contains('/') || q.ends_with("/2") || q.ends_with("/4"), "{q}");
    }
}

fn term_set_json(text: &str) -> BTreeSet<(String, String, String)> {
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let y: Vec<&str> = t["y"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
            (t["q"].as_str().unwrap().to_string(), y.join(" "), t["c"].as_str().unwrap().to_string())
        })
        .collect()
}

fn term_set_text(text: &str) -> BTreeSet<(String, String, String)> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split('\t').collect();
            (parts[0].to_string(), parts[1].to_string(), parts[2].to_string())
        })
        .collect()
}

#[test]
fn text_and_json_carry_the_same_terms() {
    let base = ["char", "--object", "std", "--series", "D", "--rank", "2", "--k0", "1", "--kj", "1", "--qmax", "3/2"];
    let text = run(&base);
    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let json = run(&json_args);
    assert_eq!(term_set_text(&stdout(&text)), term_set_json(&stdout(&json)));
}

#[test]
fn json_output_does_not_depend_on_threads() {
    let args = ["char", "--object", "psp-verma", "--series", "A", "--rank", "2", "--qmax", "4", "--format", "json"];
    let one = run(&[&["--threads", "1"], &args[..]].concat());
    let four = run(&[&["--threads", "4"], &args[..]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn out_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.json");
    let o = run(&[
        "char", "--object", "product", "--series", "A", "--rank", "2", "--qmax", "2", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with(r#"{"meta":{"series":"A","rank":2"#));
    // only the target remains; no temporary file is left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn enumerate_streams_json_lines() {
    let o = run(&["enumerate", "--kind", "standard", "--cap", "1", "--series", "A", "--rank", "2", "--qmax", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    // 1 + 2 at energy 1/2 + 4 at energy 1
    assert_eq!(lines.len(), 7);
    for v in &lines {
        assert!(v["total_energy"].is_string());
        assert!(v["dual_charge_type"].is_array());
    }
}

#[test]
fn enumerate_method_matches_formula() {
    let args = ["char", "--object", "para", "--series", "D", "--rank", "2", "--k0", "1", "--kj", "1", "--qmax", "2", "--format", "json"];
    let formula = run(&args);
    let listed = run(&[&args[..], &["--method", "enumerate"]].concat());
    assert_eq!(formula.stdout, listed.stdout);
}

#[test]
fn minsum_check_with_seed() {
    let o = run(&["verify", "--check", "minsum", "--seed", "42", "--trials", "500", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["terms_compared"], 500);
}

#[test]
fn zero_trials_is_a_precondition_error() {
    let o = run(&["verify", "--check", "minsum", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
