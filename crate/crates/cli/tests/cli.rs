use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(file)
        .to_string_lossy()
        .into_owned()
}

fn mutlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mutlab"))
        .args(args)
        .env_remove("MUTLAB_OUT")
        .output()
        .unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn mutate_writes_descriptors_and_diffs() {
    let dir = tempfile::tempdir().unwrap();
    let o = mutlab(&["mutate", &corpus("triangle.ml5"), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let records: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("mutants.json")).unwrap()).unwrap();
    assert!(!records.is_empty());
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r["id"], i);
        assert_eq!(r["set"], "common");
        for key in ["operator", "span", "original", "replacement", "description"] {
            assert!(!r[key].is_null(), "{key}");
        }
        assert!(dir.path().join("diffs").join(format!("{i}.diff")).exists());
    }
}

#[test]
fn mutate_empty_program_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("empty.ml5");
    std::fs::write(&src, "fn main() -> void {\n}\n").unwrap();
    let o = mutlab(&["mutate", p(&src), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(dir.path().join("mutants.json")).unwrap().trim(), "[]");

    let o = mutlab(&["mutate", p(&dir.path().join("missing.ml5")), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.ml5"));

    std::fs::write(&src, "fn main() -> int { return ; }").unwrap();
    let o = mutlab(&["mutate", p(&src), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:27"));

    let o = mutlab(&["mutate", &corpus("triangle.ml5"), "--set", "everything"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn matrix_on_green_and_red_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = mutlab(&[
        "matrix",
        &corpus("boundary.ml5"),
        &corpus("boundary.tests.json"),
        "--set",
        "comprehensive",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("matrix.csv")).unwrap();
    assert!(csv.starts_with("test,0,1,2,"));
    assert_eq!(csv.lines().count(), 7);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("matrix.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["budget_factor"], 10.0);
    assert_eq!(meta["budget_floor"], 10000);
    assert_eq!(meta["tests"].as_array().unwrap().len(), 6);

    let red = dir.path().join("red.json");
    std::fs::write(
        &red,
        r#"[{"name":"wrong","entry":"passes","args":[1,2],"expect":{"return":true}}]"#,
    )
    .unwrap();
    let o = mutlab(&["matrix", &corpus("boundary.ml5"), p(&red), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wrong"));

    std::fs::write(&red, "not json").unwrap();
    let o = mutlab(&["matrix", &corpus("boundary.ml5"), p(&red), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn matrix_without_mutants_has_only_test_names() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("nop.ml5");
    std::fs::write(&src, "fn main() -> void {\n}\n").unwrap();
    let tests = dir.path().join("nop.json");
    std::fs::write(&tests, r#"[{"name":"runs","entry":"main","args":[],"expect":{"return":null}}]"#).unwrap();
    let o = mutlab(&["matrix", p(&src), p(&tests), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(dir.path().join("matrix.csv")).unwrap(), "test\nruns\n");
}

#[test]
fn analyze_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");

    std::fs::write(&csv, "test,0,1\na,1,0\nb,0,1\n").unwrap();
    let o = mutlab(&["analyze", p(&csv), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("score       1.0000\n"), "{out}");
    assert!(out.contains("D=[m0, m1]"));
    let d: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("disjoint.json")).unwrap()).unwrap();
    assert_eq!(d["D"], serde_json::json!([0, 1]));

    std::fs::write(&csv, "test\na\n").unwrap();
    let out = stdout(&mutlab(&["analyze", p(&csv), "--out", p(dir.path())]));
    assert!(out.contains("mutants     0"));
    assert!(out.contains("(empty)"));
    assert!(out.contains("D=[]"));

    std::fs::write(&csv, "test,0\na,yes\n").unwrap();
    assert_eq!(mutlab(&["analyze", p(&csv), "--out", p(dir.path())]).status.code(), Some(2));
}

#[test]
fn experiment_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let o = mutlab(&[
            "experiment",
            &corpus("stats.ml5"),
            &corpus("stats.tests.json"),
            "--seed",
            "3",
            "--out",
            p(&out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        out
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["report.json", "report.csv", "quartiles.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["reps"], 30);
    assert_eq!(report["alpha"], 0.05);
    assert_eq!(report["runs"].as_array().unwrap().len(), 30);
    assert_eq!(report["significant"], report["rank_sum"]["p"].as_f64().unwrap() < 0.05);
    assert_eq!(std::fs::read_to_string(a.join("report.csv")).unwrap().lines().count(), 31);
    assert!(a.join("timing.json").exists());

    let o = mutlab(&[
        "report",
        p(&a.join("report.json")),
        p(&b.join("report.json")),
        "--out",
        p(&dir.path().join("r")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("significant:"));
    let q = std::fs::read_to_string(dir.path().join("r/quartiles.csv")).unwrap();
    assert_eq!(q.lines().count(), 3);
    assert!(q.lines().nth(1).unwrap().starts_with("stats,"));
}

#[test]
fn experiment_rejects_bad_settings() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["experiment", &corpus("stats.ml5"), &corpus("stats.tests.json")].map(String::from);
    for extra in [["--reps", "0"], ["--budget-factor", "0.5"]] {
        let mut args: Vec<&str> = base.iter().map(String::as_str).collect();
        args.extend(extra);
        args.extend(["--out", p(dir.path())]);
        assert_eq!(mutlab(&args).status.code(), Some(2), "{extra:?}");
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_mutlab"))
        .args(["mutate", &corpus("bitfield.ml5")])
        .env("MUTLAB_OUT", &target)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(target.join("mutants.json").exists());
}
