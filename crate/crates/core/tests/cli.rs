use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn langdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_langdiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_example(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let path = dir.join(format!("{name}.json"));
    let mut args = vec!["examples", name, "-o", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = langdiv(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    path
}

#[test]
fn examples_lists_built_ins() {
    let o = langdiv(&["examples"]);
    assert!(o.status.success());
    let names = stdout(&o);
    for n in ["beam-splitter", "kicked-top", "period5-10101", "fair-coin-1state"] {
        assert!(names.lines().any(|l| l == n), "{names}");
    }
}

#[test]
fn validate_accepts_built_ins_and_rejects_broken_files() {
    let dir = TempDir::new().unwrap();
    let bs = write_example(dir.path(), "beam-splitter", &[]);
    let o = langdiv(&["validate", bs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("quantum machine, 2 states"));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"kind\": \"quantum\",\n  oops\n}").unwrap();
    let o = langdiv(&["validate", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let overlap = dir.path().join("overlap.json");
    std::fs::write(
        &overlap,
        r#"{"kind":"quantum","states":["a","b"],"alphabet":["0","1"],
            "unitary":[[{"re":1},{"re":0}],[{"re":0},{"re":1}]],
            "projectors":{"0":[0,1],"1":[1]}}"#,
    )
    .unwrap();
    let o = langdiv(&["validate", overlap.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("assigned to both"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(langdiv(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(langdiv(&["validate", "/no/such/file.json"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let bs = write_example(dir.path(), "beam-splitter", &[]);
    let bad_range = langdiv(&["diversity", bs.to_str().unwrap(), "--periods", "5..x"]);
    assert_eq!(bad_range.status.code(), Some(2));
    let bad_initial = langdiv(&["language", bs.to_str().unwrap(), "--initial", "basis:7"]);
    assert_eq!(bad_initial.status.code(), Some(2));
    assert_eq!(langdiv(&["--help"]).status.code(), Some(0));
}

#[test]
fn language_json_follows_schema() {
    let dir = TempDir::new().unwrap();
    let bs = write_example(dir.path(), "beam-splitter", &[]);
    let o = langdiv(&[
        "language",
        bs.to_str().unwrap(),
        "--period",
        "1",
        "--initial",
        "basis:0",
        "--max-length",
        "3",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["alphabet"], serde_json::json!(["0", "1"]));
    assert_eq!(v["max_length"], 3);
    assert_eq!(v["period"], 1);
    assert_eq!(v["initial"], "basis:0");
    let words = v["words"].as_array().unwrap();
    assert_eq!(words.len(), 2 + 4 + 8);
    assert_eq!(words[0]["w"], "0");
    assert_eq!(words[2]["w"], "00");
    for w in words {
        let len = w["w"].as_str().unwrap().len() as i32;
        assert!((w["p"].as_f64().unwrap() - 0.5f64.powi(len)).abs() <= 1e-12);
    }
}

#[test]
fn diversity_counts_and_json() {
    let dir = TempDir::new().unwrap();
    let kt = write_example(dir.path(), "kicked-top", &["--phase", "1.3"]);
    let o = langdiv(&["diversity", kt.to_str().unwrap(), "--periods", "1..20", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stochastic_classes"], 5);
    assert_eq!(v["pseudo_period"], 4);
    let o = langdiv(&["diversity", kt.to_str().unwrap(), "--ensemble", "components", "--delta", "1e-9"]);
    let table = stdout(&o);
    assert!(table.contains("stochastic classes: 4"), "{table}");
    assert!(table.contains("holds"));
}

#[test]
fn analog_and_compare() {
    let dir = TempDir::new().unwrap();
    let bs = write_example(dir.path(), "beam-splitter", &[]);
    let analog = dir.path().join("analog.json");
    let o = langdiv(&["analog", bs.to_str().unwrap(), "-o", analog.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&analog).unwrap();
    assert!(text.contains("\"classical\""));

    let (a, b) = (bs.to_str().unwrap(), analog.to_str().unwrap());
    let same = langdiv(&["compare", a, b, "--period", "1", "--initial", "basis:0", "--delta", "1e-9"]);
    assert_eq!(same.status.code(), Some(0), "{}", stdout(&same));
    let differ = langdiv(&["compare", a, b, "--period", "2", "--initial", "basis:0", "--delta", "1e-9"]);
    assert_eq!(differ.status.code(), Some(1));
    assert!(stdout(&differ).contains("not similar"));

    let o = langdiv(&["analog", b]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pseudo_period_subcommand() {
    let dir = TempDir::new().unwrap();
    for (name, k) in [("beam-splitter", "2"), ("kicked-top", "4"), ("period5-11000", "5")] {
        let path = write_example(dir.path(), name, &[]);
        let o = langdiv(&["pseudo-period", path.to_str().unwrap()]);
        assert_eq!(stdout(&o).trim(), k, "{name}");
    }
    let coin = write_example(dir.path(), "fair-coin-1state", &[]);
    assert_eq!(stdout(&langdiv(&["pseudo-period", coin.to_str().unwrap()])).trim(), "1");
    // the beam-splitter analog mixes, so it has no unitary evolution
    let analog = write_example(dir.path(), "beam-splitter", &["--analog"]);
    assert_eq!(langdiv(&["pseudo-period", analog.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn report_is_byte_identical_across_runs_and_threads() {
    let dir = TempDir::new().unwrap();
    let p5 = write_example(dir.path(), "period5-10101", &[]);
    let args = ["report", p5.to_str().unwrap(), "--ensemble", "components"];
    let first = langdiv(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    let single = Command::new(env!("CARGO_BIN_EXE_langdiv"))
        .args(args)
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(first.stdout, single.stdout);
    assert_eq!(first.stdout, langdiv(&args).stdout);
    let text = stdout(&first);
    assert!(text.contains("stochastic classes: 4"), "{text}");
    assert!(text.contains("== classical analog"));
    assert!(text.contains("bound periodic(N=5)"));
}

#[test]
fn analog_examples_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = write_example(dir.path(), "period5-10000", &["--analog"]);
    let o = langdiv(&["validate", path.to_str().unwrap()]);
    assert!(stdout(&o).contains("classical machine, 5 states"), "{}", stdout(&o));
}
