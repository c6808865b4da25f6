use std::path::Path;
use std::process::{Command, Output};

use heatconv::cli::{Document, THREADS_ENV};

fn heatconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatconv")).args(args).env_remove(THREADS_ENV).output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("solve.json");
    let o = heatconv(&["solve", "--N", "1", "--a2", "9.711", "--method", "secular", "--K", "3", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    assert!(stdout.starts_with("solve N=1 a2=9.711 method=secular-K3 Ra=1704.733"));
    let doc = Document::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let r = &doc.results[0];
    assert!((r.rayleigh.unwrap() - 1704.733019).abs() < 1e-3);
    assert!((r.paper_value.unwrap() - 1704.733019).abs() < 1e-4);
    assert_eq!(doc.meta["command"], "solve");
}

#[test]
fn first_approximation_flags_unused_heating_rate() {
    let o = heatconv(&["solve", "--N", "5", "--a2", "9.711", "--method", "first-approx", "--format", "csv"]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stderr).unwrap().contains("N not used by this method"));
    assert!(String::from_utf8(o.stdout).unwrap().contains("1715.07935"));

    let o = heatconv(&["solve", "--N", "5", "--a2", "9.711", "--method", "first-approx"]);
    let stdout = String::from_utf8(o.stdout).unwrap();
    let (json, _summary) = stdout.trim_end().rsplit_once('\n').unwrap();
    let doc = Document::from_json(json).unwrap();
    assert_eq!(doc.results[0].note.as_deref(), Some("N not used by this method"));
}

#[test]
fn table1_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = heatconv(&["table1", "--methods", "secular", "--out", path_str(&out)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "N,a2,method,K_or_resolution,rayleigh,paper_value,rel_deviation");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16 * 3);
    for r in &rows {
        assert!(r.len() >= 7);
        if r[2] == "secular-K2" || r[2] == "secular-K3" {
            let dev: f64 = r[6].parse().unwrap();
            assert!(dev.abs() < 1e-2);
        }
    }
    assert!(String::from_utf8(o.stderr).unwrap().contains("coincide"));
}

#[test]
fn invalid_input_exits_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    for args in [
        vec!["solve", "--a2", "-1"],
        vec!["solve", "--method", "nonsense"],
        vec!["neutral-curve", "--a-min", "4", "--a-max", "3"],
        vec!["solve", "--bogus"],
    ] {
        let mut full = args.clone();
        full.extend(["--out", path_str(&out)]);
        let o = heatconv(&full);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
    let missing = dir.path().join("nope").join("x.csv");
    assert_eq!(heatconv(&["table1", "--out", path_str(&missing)]).status.code(), Some(2));
}

#[test]
fn bad_thread_count_exits_two() {
    let o = Command::new(env!("CARGO_BIN_EXE_heatconv"))
        .args(["solve"])
        .env(THREADS_ENV, "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_heatconv"))
        .args(["neutral-curve", "--samples", "4"])
        .env(THREADS_ENV, "2")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn solver_failure_exits_three() {
    // Ra(a) falls monotonically across this bracket, so it holds no minimum.
    let o = heatconv(&["critical", "--method", "first-approx", "--a-min", "1e-9", "--a-max", "2e-9"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# point\nN = 1\na2 = 9.711\nmethod = secular\nK = 2\n").unwrap();
    let o = heatconv(&["solve", "--config", path_str(&cfg), "--K", "3"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.lines().last().unwrap().contains("method=secular-K3 Ra=1704.733"));

    std::fs::write(&cfg, "N = 1\ncolour = blue\n").unwrap();
    assert_eq!(heatconv(&["solve", "--config", path_str(&cfg)]).status.code(), Some(2));
}

#[test]
fn surface_plot_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("surface.dat");
    let out = dir.path().join("surface.json");
    let o = heatconv(&[
        "neutral-surface", "--n-min", "0", "--n-max", "8", "--n-samples", "3", "--a-min", "2", "--a-max", "4",
        "--samples", "3", "--plot", path_str(&plot), "--out", path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&plot).unwrap();
    let blocks: Vec<&str> = text.trim_end().split("\n\n").collect();
    assert_eq!(blocks.len(), 3);
    assert!(blocks.iter().all(|b| b.lines().filter(|l| !l.starts_with('#')).count() == 3));

    let doc = Document::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.results.len(), 9);
    let again = Document::from_json(&doc.to_json()).unwrap();
    assert_eq!(again, doc);
}

#[test]
fn compare_lists_every_method() {
    let o = heatconv(&["compare", "--N", "1", "--a2", "9.711"]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    let summary = stdout.lines().last().unwrap();
    for tag in ["first-approx=", "secular-K2=", "secular-K3=", "secular-K8=", "variational-K2=", "oracle-R32="] {
        assert!(summary.contains(tag), "{summary}");
    }
}

#[test]
fn help_exits_zero() {
    assert!(heatconv(&["--help"]).status.success());
}
