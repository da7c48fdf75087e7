use std::path::PathBuf;
use std::process::Command;

use twalex::input::parse_presentation;
use twalex::presentation::{closure_presentation, BraidWord};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.toml"))
}

struct Run {
    status: i32,
    stdout: String,
    stderr: String,
}

fn twalex(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_twalex")).args(args).output().expect("binary runs");
    Run {
        status: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn on(command: &str, name: &str, extra: &[&str]) -> Run {
    let path = fixture(name);
    let mut args = vec![command, "--input", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    twalex(&args)
}

fn temp_doc(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twalex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn compute_reports_the_twisted_polynomial() {
    let r = on("compute", "curve2", &[]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    assert!(r.stdout.contains("wada: t + 1\n"), "{}", r.stdout);
    assert!(r.stdout.contains("delta1: t + 1\n"));
    assert!(r.stderr.is_empty());
}

#[test]
fn compute_on_trefoil_has_stable_lines() {
    let r = on("compute", "trefoil", &[]);
    assert_eq!(r.status, 0);
    assert!(r.stdout.contains("delta1: t^2 - t + 1\n"));
    assert!(r.stdout.contains("torsion: (t^2 - t + 1)/(t - 1)\n"));
    assert!(r.stdout.contains("acyclic: true\n"));
}

#[test]
fn undefined_torsion_line() {
    let path = temp_doc("free.toml", "generators = [\"a\", \"b\"]\n");
    let r = twalex(&["compute", "--input", path.to_str().unwrap()]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    assert!(r.stdout.contains("torsion: undefined (H1 not torsion)\n"), "{}", r.stdout);
    assert!(r.stdout.contains("h1_torsion: false\n"));
}

#[test]
fn braid2pres_round_trips() {
    let r = on("braid2pres", "trefoil", &[]);
    assert_eq!(r.status, 0, "{}", r.stderr);
    let parsed = parse_presentation(&r.stdout).unwrap();
    let expected = closure_presentation(&BraidWord::parse(2, "s1 s1 s1").unwrap());
    assert_eq!(parsed, expected);
    assert!(r.stdout.contains("\"g1 g2 g1 g2 g1^-1 g2^-1 g1^-2\""), "{}", r.stdout);
}

#[test]
fn braid2pres_requires_a_braid() {
    let r = on("braid2pres", "curve1", &[]);
    assert_eq!(r.status, 1);
    assert!(r.stderr.starts_with("E107"), "{}", r.stderr);
}

#[test]
fn zvk_relation_modes() {
    let reduced = on("zvk", "cuspidal_cubic", &[]);
    let full = on("zvk", "cuspidal_cubic", &["--relations", "full"]);
    assert_eq!(reduced.status, 0);
    assert_eq!(full.status, 0);
    let (a, b) = (parse_presentation(&reduced.stdout).unwrap(), parse_presentation(&full.stdout).unwrap());
    assert_eq!(a.relators().len() + 1, b.relators().len());
    // the extra relator adds a 2-cell, so H2 ranks differ but the orders and torsion agree
    let keep = ["delta0:", "delta1:", "delta2:", "wada:", "torsion:", "h1_torsion:"];
    let strip = |s: &str| s.lines().filter(|l| keep.iter().any(|k| l.starts_with(k))).collect::<Vec<_>>().join("\n");
    let ca = on("compute", "cuspidal_cubic", &[]);
    let cb = on("compute", "cuspidal_cubic", &["--relations", "full"]);
    assert_eq!(strip(&ca.stdout), strip(&cb.stdout));
}

#[test]
fn validate_names_the_broken_relator() {
    let ok = on("validate", "nodal", &[]);
    assert_eq!(ok.status, 0, "{}", ok.stderr);
    assert!(ok.stdout.contains("valid: true"));
    let bad = on("validate", "nodal_mutated", &[]);
    assert_eq!(bad.status, 1);
    assert!(bad.stdout.contains("valid: false"));
    assert!(bad.stderr.contains("E202: relator 2 (l^-1 x1 l x2^-1)"), "{}", bad.stderr);
}

#[test]
fn compute_refuses_an_invalid_twist() {
    let r = on("compute", "nodal_mutated", &[]);
    assert_eq!(r.status, 1);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("E202"));
}

#[test]
fn parse_errors_carry_code_and_location() {
    let path = temp_doc("bad.toml", "generators = [\"a\", \"b\"]\nrelators = [\"a b c\"]\n");
    let r = twalex(&["compute", "--input", path.to_str().unwrap()]);
    assert_eq!(r.status, 1);
    assert_eq!(r.stderr.lines().next().unwrap(), "E102 at 2:18: unknown generator 'c' at offset 4");
    let missing = twalex(&["compute", "--input", "/nonexistent/doc.toml"]);
    assert_eq!(missing.status, 1);
    assert!(missing.stderr.starts_with("E100"));
}

#[test]
fn minor_guard_is_an_engine_error() {
    let r = on("compute", "nodal", &["--max-minors", "1"]);
    assert_eq!(r.status, 2);
    assert!(r.stderr.starts_with("E303"), "{}", r.stderr);
}

#[test]
fn cross_check_lists_every_choice() {
    let r = on("compute", "nodal", &["--cross-check"]);
    assert_eq!(r.status, 0);
    assert!(r.stdout.contains(
        "wada_choices:\n  generator: l, wada: t + 1\n  generator: x1, wada: t + 1\n  generator: x2, wada: t + 1\n"
    ));
    assert!(r.stdout.contains("choice_independent: true\n"));
}

#[test]
fn theorem_and_corollary_lines() {
    for command in ["check-theorem", "check-corollary"] {
        for name in ["two_lines", "cuspidal_cubic"] {
            let r = on(command, name, &[]);
            assert_eq!(r.status, 0, "{}", r.stderr);
            assert!(r.stdout.contains("residual: 1, divisible: true\n"), "{command} {name}: {}", r.stdout);
        }
    }
    let r = on("check-theorem", "curve2", &[]);
    assert_eq!(r.status, 1);
    assert!(r.stderr.starts_with("E107"));
}

#[test]
fn scan_output() {
    let r = on("scan-cv", "curve2", &["--scan-order", "2"]);
    assert_eq!(r.status, 0);
    assert!(r.stdout.contains("character: (z^0, z^1), value: (1, -1), delta1: t + 1, membership: false\n"));
    assert!(r.stdout.contains("character: (z^0, z^0), value: (1, 1), delta1: t - 1, membership: true\n"));
    let unmarked = temp_doc("unmarked.toml", "generators = [\"a\"]\n");
    let r = twalex(&["scan-cv", "--input", unmarked.to_str().unwrap()]);
    assert_eq!(r.status, 1);
    assert!(r.stderr.starts_with("E205"));
}

#[test]
fn structured_output_mirrors_text() {
    for command in ["compute", "check-corollary", "scan-cv"] {
        let name = if command == "compute" {
            "nodal"
        } else if command == "scan-cv" {
            "curve2"
        } else {
            "two_lines"
        };
        let text = on(command, name, &[]);
        let json = on(command, name, &["--format", "structured"]);
        assert_eq!(json.status, 0);
        let value: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
        let keys: Vec<String> = value.as_object().unwrap().keys().cloned().collect();
        let text_keys: Vec<String> = text
            .stdout
            .lines()
            .filter(|l| !l.starts_with(' '))
            .flat_map(|l| l.split(", ").map(|p| p.split(':').next().unwrap().to_string()).collect::<Vec<_>>())
            .collect();
        assert_eq!(keys, text_keys, "{command}");
    }
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<String> = (0..3).map(|_| on("compute", "nodal", &["--cross-check"]).stdout).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn usage_errors_exit_one() {
    let r = twalex(&["compute"]);
    assert_eq!(r.status, 1);
    let r = twalex(&["frobnicate", "--input", "x"]);
    assert_eq!(r.status, 1);
}
