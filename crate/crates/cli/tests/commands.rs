use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn syzygy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzygy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("syzygy-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn build(dir: &Path, file: &str, args: &[&str]) -> PathBuf {
    let out = dir.join(file);
    let mut all = vec!["build"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let res = syzygy(&all);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    out
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_echoes_invariants() {
    let dir = scratch_dir("build");
    let quintic = syzygy(&["build", "elliptic-normal-curve", "--d", "5", "--out", dir.join("q.json").to_str().unwrap()]);
    assert_eq!(quintic.status.code(), Some(0));
    assert!(stderr(&quintic).contains("n=1 d=5 e=3 g=1"));
    assert!(stderr(&quintic).contains("seed: 1"));

    let scroll = syzygy(&["build", "scroll", "--a", "1,2"]);
    assert_eq!(scroll.status.code(), Some(0));
    assert!(stderr(&scroll).contains("n=2 d=3 e=2 g=0"));
    assert!(stdout(&scroll).contains("\"kind\""));
}

#[test]
fn bad_parameters_are_usage_errors() {
    assert_eq!(syzygy(&["build", "scroll", "--a", "0,1"]).status.code(), Some(1));
    assert_eq!(syzygy(&["build", "cubic-threefold"]).status.code(), Some(1));
    assert_eq!(syzygy(&["build", "elliptic-normal-curve"]).status.code(), Some(1));
    assert_eq!(syzygy(&["--field", "fp:32004", "build", "veronese-surface"]).status.code(), Some(1));
    assert_eq!(syzygy(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn twisted_cubic_grid() {
    let dir = scratch_dir("cubic");
    let cubic = build(&dir, "c.json", &["rational-normal-curve", "--d", "3"]);
    let out = syzygy(&["betti", cubic.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("    1: . 3 2 . ."), "{text}");

    let csv = stdout(&syzygy(&["betti", cubic.to_str().unwrap(), "--kind", "coordinate", "--format", "csv"]));
    assert!(csv.contains("1,1,3\n"));
    assert!(csv.contains("2,1,2\n"));
}

#[test]
fn projection_is_deterministic_and_marks_open_cells() {
    let dir = scratch_dir("project");
    let quintic = build(&dir, "q.json", &["elliptic-normal-curve", "--d", "5"]);
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for target in [&a, &b] {
        let out = syzygy(&["project", quintic.to_str().unwrap(), "--t", "1", "--seed", "11", "--out", target.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert!(stderr(&out).contains("seed: 11"));
        assert!(stderr(&out).contains("in P^3"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let zero = syzygy(&["project", quintic.to_str().unwrap(), "--t", "0"]);
    assert_eq!(zero.status.code(), Some(1));

    let grid = stdout(&syzygy(&["betti", a.to_str().unwrap()]));
    assert!(grid.contains("    1: 1 4 ? . ."), "{grid}");
    assert!(grid.contains("    2: . ? 1 . ."), "{grid}");
}

#[test]
fn verify_exit_codes() {
    let dir = scratch_dir("verify");
    let quintic = build(&dir, "q.json", &["elliptic-normal-curve", "--d", "5"]);
    let projected = dir.join("p.json");
    let out = syzygy(&["project", quintic.to_str().unwrap(), "--t", "1", "--out", projected.to_str().unwrap()]);
    assert!(out.status.success());

    let thm13 = syzygy(&["verify", projected.to_str().unwrap(), "--theorem", "thm13", "--format", "json"]);
    assert_eq!(thm13.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&thm13)).unwrap();
    assert_eq!(report["status"], "pass");
    assert_eq!(report["theorem"], "thm13");
    assert!(report["seed_chain"].is_array());

    let outside = syzygy(&["verify", quintic.to_str().unwrap(), "--theorem", "thm12ln", "--k", "9"]);
    assert_eq!(outside.status.code(), Some(2));

    let unknown = syzygy(&["verify", quintic.to_str().unwrap(), "--theorem", "thm99"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn report_csv_summary() {
    let dir = scratch_dir("report");
    let scroll = build(&dir, "s.json", &["scroll", "--a", "1,2"]);
    let cubic = build(&dir, "c.json", &["rational-normal-curve", "--d", "3"]);
    let out = syzygy(&["report", scroll.to_str().unwrap(), cubic.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("theorem,model,field,seed_chain,status"));
    assert!(text.lines().skip(1).all(|l| l.contains(",pass,")), "{text}");
    assert!(text.contains("prop32_33,\"scroll(1,2)\""));
}
