//! End-to-end checks of the binary: golden outputs, byte determinism, and
//! the exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ghostpoly")
}

fn write_scene(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ghostpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn demo_scene() -> PathBuf {
    write_scene(
        "demo.json",
        r#"{
            "version": 1,
            "points": {"a": "0", "b": "2", "c": "1", "d": "3"},
            "geodesics": {
                "g": {"src": "a", "dst": "b"},
                "h": {"src": "c", "dst": "d"},
                "far": {"src": "10", "dst": "11"},
                "phantom": {"src": "a", "dst": "a"}
            },
            "configurations": {"G": ["g", "h"]},
            "family": {"kind": "fuchsian"},
            "group": [[[5, 3], [3, 5]], [[26, -420], [3, -46]]]
        }"#,
    )
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

#[test]
fn eps_reports_values_and_phantoms() {
    let scene = demo_scene();
    let s = scene.to_str().unwrap();
    let out = run(&["--scene", s, "eps", "g", "h"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"epsilon\": \"1\""), "{text}");

    let out = run(&["--scene", s, "eps", "g", "phantom"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"epsilon\": \"0\""), "{text}");

    let out = run(&["--scene", s, "eps", "g", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bracket_golden_output() {
    let scene = demo_scene();
    let s = scene.to_str().unwrap();
    let out = run(&["--scene", s, "bracket", "[g,h]"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("\"result\": \"1*cas + -1*<(0->2)@0,(1->3)@0>\""),
        "{text}"
    );

    // Casimir rule and antisymmetry through the two-argument form
    let out = run(&["--scene", s, "bracket", "cas", "G"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"result\": \"0\""), "{text}");
    let out = run(&["--scene", s, "bracket", "G", "G"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"result\": \"0\""), "{text}");

    // non-crossing pair brackets to zero
    let out = run(&["--scene", s, "bracket", "g", "far"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"result\": \"0\""), "{text}");

    let out = run(&["--scene", s, "bracket", "[g,"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_and_honors_exit_codes() {
    let scene = demo_scene();
    let s = scene.to_str().unwrap();
    let args = ["--scene", s, "--seed", "11", "--samples", "25", "verify", "jacobi"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same scene and seed must be byte-identical");
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("\"passed\": true"), "{text}");
    assert!(text.contains("\"seed\": 11"), "{text}");

    let c = run(&["--scene", s, "--seed", "12", "--samples", "25", "verify", "jacobi"]);
    assert!(c.status.success());

    let out = run(&["--scene", s, "verify", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generic_family_sign_lemma_fails_with_witnesses() {
    let scene = write_scene(
        "generic.json",
        r#"{"version": 1, "family": {"kind": "generic", "dim": 2, "seed": 3}}"#,
    );
    let out = run(&[
        "--scene",
        scene.to_str().unwrap(),
        "--seed",
        "9",
        "--samples",
        "40",
        "verify",
        "sign-lemma",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"passed\": false"), "{text}");
    assert!(text.contains("g1="), "witnesses listed: {text}");
}

#[test]
fn orbit_sum_csv_shape() {
    let scene = demo_scene();
    let s = scene.to_str().unwrap();
    let out = run(&["--scene", s, "--max-word-length", "2", "orbit-sum", "g", "h"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "length,words,skipped,layer_sum,partial_sum");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,1,0,"), "{text}");

    // length 0 partial sum equals the plain intersection value
    let first_partial = lines[1].split(',').nth(4).unwrap();
    assert_eq!(first_partial, "-1/4");

    // json shape on request
    let out = run(&[
        "--scene",
        s,
        "--max-word-length",
        "0",
        "--format",
        "json",
        "orbit-sum",
        "g",
        "h",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"total\": \"-1/4\""), "{text}");
}

#[test]
fn barycenter_decimal_report() {
    let scene = demo_scene();
    let s = scene.to_str().unwrap();
    let out = run(&["--scene", s, "barycenter", "G"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"grad_tolerance\": 1e-10"), "{text}");
    assert!(text.contains("\"core_diameter\""), "{text}");
}
