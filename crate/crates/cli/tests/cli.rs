use std::path::PathBuf;
use std::process::{Command, Output};

fn twk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scratch(name: &str) -> String {
    let dir: PathBuf = std::env::temp_dir().join(format!("twk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

fn family(name: &str, params: &[&str]) -> String {
    let path = scratch(&format!("{name}{}.2fa", params.join("")));
    let mut args = vec!["family", name];
    args.extend_from_slice(params);
    args.extend_from_slice(&["-o", &path]);
    let out = twk(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn run_reports_counts() {
    let f = family("suffix", &["--n", "2"]);
    let out = twk(&["run", &f, "10$"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "accepted left_moves=2 steps=7\n");

    let traced = stdout(&twk(&["run", &f, "10$", "--trace"]));
    assert_eq!(traced.lines().count(), 1 + 8);
    assert_eq!(traced.lines().nth(1), Some("q0 0"));

    assert_eq!(stdout(&twk(&["run", &f, "1$"])), "rejected-bad-halt left_moves=2 steps=3\n");
}

#[test]
fn lambda_verbs() {
    let f = family("suffix", &["--n", "2"]);
    assert_eq!(stdout(&twk(&["lambda-machine", &f])), "finite 2\n");
    assert_eq!(stdout(&twk(&["lambda-word", &f, "010$"])), "left_moves=2\n");
    assert_eq!(stdout(&twk(&["lambda-word", &f, "00$"])), "rejected\n");
}

#[test]
fn word_file_tokens() {
    let f = family("suffix", &["--n", "2"]);
    let w = scratch("word.txt");
    std::fs::write(&w, "1 0 $\n").unwrap();
    assert_eq!(stdout(&twk(&["run", &f, "--word-file", &w])), "accepted left_moves=2 steps=7\n");
}

#[test]
fn spectrum_rendering() {
    let u = family("unary", &["--n", "2"]);
    assert_eq!(stdout(&twk(&["spectrum", &u])), "sigma = (2; 2) pairs=[(2,0)] exhaustive=true\n");
    let json: serde_json::Value = serde_json::from_str(&stdout(&twk(&["spectrum", &u, "--json"]))).unwrap();
    assert_eq!(json["sigma_0"], 2);
    assert_eq!(json["exhaustive"], true);
}

#[test]
fn conversions_and_equivalence() {
    let f = family("suffix", &["--n", "2"]);
    let d = family("suffix_dfa", &["--n", "2"]);
    assert_eq!(stdout(&twk(&["equiv", &f, &d])), "equivalent\n");
    for method in ["shepherdson", "crossing"] {
        let out = scratch(&format!("{method}.2fa"));
        assert!(twk(&["convert", &f, "--method", method, "-o", &out]).status.success());
        assert_eq!(stdout(&twk(&["equiv", &out, &d])), "equivalent\n");
    }
    let bounded = stdout(&twk(&["convert", &f, "--method", "bounded-k", "-k", "2"]));
    assert!(bounded.starts_with("kind: 1dfa\n"));
    let min = stdout(&twk(&["minimize", &f]));
    assert!(min.contains("states: 5\n"), "{min}");

    let t1 = scratch("t1.2fa");
    assert!(twk(&["bounded-lang", &f, "-k", "1", "-o", &t1]).status.success());
    let diff = stdout(&twk(&["equiv", &t1, &d]));
    assert!(diff.starts_with("different witness="), "{diff}");
}

#[test]
fn output_is_deterministic() {
    let f = family("awbwa_2dfa", &["--n", "1"]);
    let a = twk(&["convert", &f, "--method", "crossing"]);
    let b = twk(&["convert", &f, "--method", "crossing"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(twk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(twk(&["convert", "x.2fa", "--method", "magic"]).status.code(), Some(2));
    assert_eq!(twk(&["lambda-machine", "/nonexistent/m.2fa"]).status.code(), Some(1));
    assert_eq!(twk(&["family", "nosuch", "--n", "2"]).status.code(), Some(1));
    let f = family("suffix", &["--n", "2"]);
    assert_eq!(twk(&["run", &f, "10x"]).status.code(), Some(1));
    assert_eq!(twk(&["convert", &f, "--method", "bounded-k"]).status.code(), Some(1));
}
