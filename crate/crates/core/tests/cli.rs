use std::path::Path;
use std::process::{Command, Output};

fn hypergrid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypergrid"))
        .args(args)
        .env_remove("HYPERGRID_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exact_g_row() {
    let o = hypergrid(&["exact-g", "--n", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,g,nodes"));
    assert!(lines.next().unwrap().starts_with("4,5,"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(hypergrid(&["grid-profile"]).status.code(), Some(2));
    assert_eq!(hypergrid(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(hypergrid(&["--workers", "0", "exact-g", "--n", "3"]).status.code(), Some(2));
    let o = hypergrid(&["slope-search", "--n", "1", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("slope-search:"));
}

#[test]
fn budget_errors_exit_three() {
    let o = hypergrid(&["exact-g", "--n", "9"]);
    assert_eq!(o.status.code(), Some(3));
    let o = hypergrid(&["--budget", "10", "slope-search", "--n", "32", "--p", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn manifest_sidecar_and_set() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("search.csv");
    let set = dir.path().join("set.json");
    let o = hypergrid(&[
        "--out",
        data.to_str().unwrap(),
        "--emit-set",
        set.to_str().unwrap(),
        "slope-search",
        "--n",
        "16",
        "--c",
        "2",
        "--seeds",
        "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&data).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("search.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["command"], "slope-search");
    assert_eq!(manifest["rows"].as_array().unwrap().len(), 3);
    assert_eq!(manifest["volatile_columns"][0], "elapsed_ms");
    let points: serde_json::Value = serde_json::from_slice(&std::fs::read(&set).unwrap()).unwrap();
    assert_eq!(points["verified"], true);
}

#[test]
fn out_dir_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hypergrid"))
        .args(["--format", "json", "visible", "--i-max", "4"])
        .env("HYPERGRID_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rows: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("visible.json")).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
    assert!(Path::new(&dir.path().join("visible.json.manifest.json")).exists());
}

#[test]
fn rows_identical_across_worker_counts() {
    let runs = [
        vec!["turan-search", "--r", "3", "--strategy", "deletion:0.5", "--seeds", "8"],
        vec!["grid-profile", "--n", "20", "--mode", "sampled", "--samples", "300", "--seed", "9"],
        vec!["ladder", "--variable", "n", "--values", "4,6,8", "grid-counts"],
    ];
    for args in runs {
        let outs: Vec<String> = ["1", "2", "4"]
            .iter()
            .map(|w| {
                let mut full = vec!["--workers", w];
                full.extend(&args);
                let o = hypergrid(&full);
                assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
                stdout(&o)
            })
            .collect();
        assert!(outs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}
