//! End-to-end checks of the compiled binary.

use std::process::Command;

fn fgraph(args: &[&str]) -> (String, String, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_fgraph"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.success(),
    )
}

#[test]
fn eval_and_folner_print_exact_values() {
    let (out, _, ok) = fgraph(&["eval", "--word", "x0", "--at", "1/2"]);
    assert!(ok);
    assert_eq!(out.trim(), "1/4");

    let (out, _, ok) = fgraph(&["folner", "--m", "10", "--tuple-size", "2"]);
    assert!(ok);
    assert_eq!(out.trim(), "1/5");

    let (out, _, ok) = fgraph(&["transporter", "--from", "1/2", "--to", "1/4"]);
    assert!(ok);
    assert_eq!(out.trim(), "x0");

    let (out, _, ok) = fgraph(&["forest", "--word", "x0 x0"]);
    assert!(ok);
    assert_eq!(out.trim(), "[((.,.),.)]");
}

#[test]
fn malformed_input_fails_cleanly() {
    let (_, err, ok) = fgraph(&["eval", "--word", "x0", "--at", "1/3"]);
    assert!(!ok);
    assert!(err.contains("not a dyadic rational"));

    let (_, err, ok) = fgraph(&["forest", "--word", "x0 x1^-1"]);
    assert!(!ok);
    assert!(err.contains("positive"));
}

#[test]
fn haar_apply_prints_the_exact_expansion() {
    let (out, _, ok) = fgraph(&["haar", "apply", "--gen", "x0", "--index", "const"]);
    assert!(ok);
    let lines: Vec<&str> = out.trim().lines().collect();
    assert_eq!(
        lines,
        vec![
            "const: 1/4+1/2*sqrt2",
            "(0,1): -1/4",
            "(1,1): -1/2+1/4*sqrt2",
        ]
    );
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let dir = std::env::temp_dir().join("fgraph-verify-test");
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let (_, _, ok) = fgraph(&["verify-all", "--seed", "11", "--out", a.to_str().unwrap()]);
    assert!(ok, "verify-all must exit zero on a correct build");
    let (_, _, ok) = fgraph(&["verify-all", "--seed", "11", "--out", b.to_str().unwrap()]);
    assert!(ok);
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "identical seeds must give byte-identical summaries"
    );
}
