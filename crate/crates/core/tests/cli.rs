use std::process::{Command, Output};

fn gluings(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gluings")).args(args).output().unwrap()
}

#[test]
fn enumerate_to_stdout() {
    let out = gluings(&["--n", "2", "--mode", "enumerate"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(gluings(&["--n", "2"]).status.code(), Some(2));
    assert_eq!(gluings(&["--n", "2", "--mode", "nonsense"]).status.code(), Some(2));
    assert_eq!(gluings(&["--n", "1", "--mode", "distances"]).status.code(), Some(2));
}

#[test]
fn invalid_gluing_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torus.jsonl");
    let torus = square_gluings::surface::fixtures::torus();
    std::fs::write(&path, torus.to_json_line() + "\n").unwrap();
    let out = gluings(&["--n", "1", "--mode", "distances", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn budget_exhaustion_exits_4_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("run.ckpt");
    let ckpt = ckpt.to_str().unwrap();
    let out = gluings(&["--n", "3", "--mode", "enumerate", "--node-budget", "20", "--checkpoint", ckpt]);
    assert_eq!(out.status.code(), Some(4));
    let mut last = out;
    for _ in 0..200 {
        if last.status.code() != Some(4) {
            break;
        }
        last = gluings(&["--n", "3", "--mode", "enumerate", "--node-budget", "20", "--checkpoint", ckpt]);
    }
    assert_eq!(last.status.code(), Some(0));
    let fresh = gluings(&["--n", "3", "--mode", "enumerate"]);
    assert_eq!(last.stdout, fresh.stdout);
}

#[test]
fn out_file_and_dc_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let out = gluings(&["--n", "12", "--mode", "dc-count", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("n,count\n"));
}
