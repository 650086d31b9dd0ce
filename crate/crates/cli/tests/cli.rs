use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use mixsolve_cli::commands::{
    cmd_demo_example1, cmd_gen, cmd_solve, cmd_verify, parse_bounds, parse_fraction,
};
use mixsolve_cli::format::{from_json, to_json, InstanceFile, SolutionFile};
use mixsolve_cli::{CliError, Exit};
use mixsolve_core::gen::{random_instance, GenParams};
use mixsolve_core::{solve, Rational};
use tempfile::TempDir;

const INSTANCE_A: &str =
    r#"{"J": 1, "d": ["1"], "atoms": [{"w": ["0", "2"]}, {"w": ["1", "0"]}, {"w": ["2", "2"]}]}"#;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mixsolve"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn solve_file(dir: &TempDir, input: &Path) -> (Exit, PathBuf) {
    let output = dir.path().join("solution.json");
    let exit = cmd_solve(input, &output, &mut Vec::new()).unwrap();
    (exit, output)
}

fn verify(input: &Path, solution: &Path) -> (Exit, String) {
    let mut out = Vec::new();
    let exit = cmd_verify(input, solution, &mut out).unwrap();
    (exit, String::from_utf8(out).unwrap())
}

#[test]
fn instance_a_solves_to_one_half() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.json", INSTANCE_A);
    let (exit, output) = solve_file(&dir, &input);
    assert_eq!(exit, Exit::Ok);
    let sol: SolutionFile = from_json("solution", &fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(sol.value.unwrap().0.to_string(), "1/2");
    assert_eq!(sol.mixture.len(), 2);
    let (exit, report) = verify(&input, &output);
    assert_eq!(exit, Exit::Ok, "{report}");
    assert!(report.lines().all(|l| l.starts_with("ok")));
}

#[test]
fn inconsistent_instance_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.json", &INSTANCE_A.replace(r#"["1"]"#, r#"["-1"]"#));
    let (exit, output) = solve_file(&dir, &input);
    assert_eq!(exit, Exit::Inconsistent);
    assert!(fs::read_to_string(&output)
        .unwrap()
        .contains(r#""status": "inconsistent""#));
    assert_eq!(verify(&input, &output).0, Exit::Ok);
}

#[test]
fn malformed_rational_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "bad.json",
        "{\"J\": 1, \"d\": [\"1\"],\n \"atoms\": [{\"w\": [\"0\", \"1/0\"]}]}",
    );
    let err = cmd_solve(&input, &dir.path().join("o.json"), &mut Vec::new()).unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, CliError::Parse { .. }));
    assert!(msg.contains("invalid rational"), "{msg}");
    assert!(msg.contains("line 2"), "{msg}");
    let (code, _, stderr) = bin(&[
        "solve",
        "--input",
        input.to_str().unwrap(),
        "--output",
        "/dev/null",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("invalid rational"));
}

#[test]
fn negative_infinity_is_rejected() {
    let text = r#"{"J": 0, "d": [], "atoms": [{"w": ["-inf"]}]}"#;
    assert!(from_json::<InstanceFile>("x", text).is_err());
}

#[test]
fn bad_weight_sum_fails_verification() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.json", INSTANCE_A);
    let sol = r#"{"status": "optimal", "value": "1/2", "branch": "main",
        "mixture": [{"atom": 0, "weight": "1/2"}, {"atom": 1, "weight": "2/5"}]}"#;
    let (exit, report) = verify(&input, &write(&dir, "s.json", sol));
    assert_eq!(exit, Exit::VerificationFailed);
    assert!(
        report.contains("mixture weights do not sum to 1"),
        "{report}"
    );
}

#[test]
fn oversized_support_fails_verification() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.json", INSTANCE_A);
    let sol = r#"{"status": "optimal", "value": "1", "branch": "main",
        "mixture": [{"atom": 0, "weight": "1/3"}, {"atom": 1, "weight": "1/3"}, {"atom": 2, "weight": "1/3"}]}"#;
    let path = write(&dir, "s.json", sol);
    let (exit, report) = verify(&input, &path);
    assert_eq!(exit, Exit::VerificationFailed);
    assert!(report.contains("support exceeds J+1"), "{report}");
    let (code, stdout, _) = bin(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--solution",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
    assert!(stdout.contains("FAIL"));
}

#[test]
fn suboptimal_value_fails_verification() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.json", INSTANCE_A);
    let sol = r#"{"status": "optimal", "value": "1", "branch": "main",
        "mixture": [{"atom": 1, "weight": "1"}],
        "certificate": {"w_star": ["1", "0"], "planes": [{"b": ["1/2", "1/2"], "beta": "1/2"}], "active": [1]}}"#;
    let (exit, report) = verify(&input, &write(&dir, "s.json", sol));
    assert_eq!(exit, Exit::VerificationFailed);
    assert!(report.contains("FAIL  optimality"), "{report}");
}

#[test]
fn gen_is_deterministic_per_seed() {
    let run = |seed: u64, p: &Rational| {
        let mut out = Vec::new();
        cmd_gen(5, 2, seed, p, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    };
    let p = q(1, 10);
    assert_eq!(run(7, &p), run(7, &p));
    assert_ne!(run(7, &p), run(8, &p));
    assert!(!run(7, &q(0, 1)).contains("inf"));
    let (code, a, _) = bin(&[
        "gen",
        "--atoms",
        "5",
        "--constraints",
        "2",
        "--seed",
        "7",
        "--inf-fraction",
        "0.1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(a, run(7, &p));
}

#[test]
fn single_atom_instance_takes_its_own_value() {
    let mut out = Vec::new();
    cmd_gen(1, 0, 3, &q(0, 1), &mut out).unwrap();
    let file: InstanceFile = from_json("gen", std::str::from_utf8(&out).unwrap()).unwrap();
    let inst = file.to_instance().unwrap();
    let outcome = solve(&inst).unwrap();
    assert_eq!(outcome.solution().unwrap().value, inst.atoms()[0].w.0[0]);
}

#[test]
fn files_round_trip() {
    for seed in 0..40 {
        let inst = random_instance(&GenParams {
            atoms: 1 + (seed as usize % 9),
            constraints: seed as usize % 4,
            seed,
            inf_fraction: q(1, 5),
        })
        .unwrap();
        let file = InstanceFile::from_instance(&inst);
        let back: InstanceFile = from_json("instance", &to_json(&file)).unwrap();
        assert_eq!(back.to_instance().unwrap(), inst);

        let outcome = solve(&inst).unwrap();
        let sol = SolutionFile::from_outcome(&outcome);
        let parsed: SolutionFile = from_json("solution", &to_json(&sol)).unwrap();
        assert_eq!(parsed, sol);
        assert_eq!(parsed.to_outcome().unwrap(), outcome);
    }
}

#[test]
fn verify_accepts_every_solve_output() {
    let dir = TempDir::new().unwrap();
    for seed in 100..130 {
        let mut text = Vec::new();
        cmd_gen(8, (seed % 4) as usize, seed, &q(1, 10), &mut text).unwrap();
        let input = write(&dir, "g.json", std::str::from_utf8(&text).unwrap());
        let (_, output) = solve_file(&dir, &input);
        let (exit, report) = verify(&input, &output);
        assert_eq!(exit, Exit::Ok, "seed {seed}: {report}");
    }
}

#[test]
fn demo_reports_the_counterexample() {
    let mut out = Vec::new();
    assert_eq!(cmd_demo_example1(&mut out).unwrap(), Exit::Ok);
    let text = String::from_utf8(out).unwrap();
    for needle in [
        "b = (0, 1)",
        "beta = 1",
        "violated by (inf, 0)",
        "certificate verified, k ≤ J+1",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in\n{text}");
    }
    let (code, again, _) = bin(&["demo", "example1"]);
    assert_eq!(code, 0);
    assert_eq!(again, text);
}

#[test]
fn mdp_solve_mixes_two_policies() {
    let dir = TempDir::new().unwrap();
    let mdp = r#"{"states": 1, "actions": [2], "P": [[["1"], ["1"]]],
        "costs": [[["0", "1"]], [["2", "0"]]], "gamma": "1/2", "initial": ["1"]}"#;
    let path = write(&dir, "m.json", mdp);
    let (code, stdout, _) = bin(&[
        "mdp-solve",
        "--input",
        path.to_str().unwrap(),
        "--bounds",
        "2",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("value: 1\n"), "{stdout}");
    assert!(stdout.contains("policy [0] with weight 1/2"));
    assert!(stdout.contains("policy [1] with weight 1/2"));
    let (code, _, _) = bin(&[
        "mdp-solve",
        "--input",
        path.to_str().unwrap(),
        "--bounds",
        "-1",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn fraction_parsing() {
    assert_eq!(parse_fraction("0.1").unwrap(), q(1, 10));
    assert_eq!(parse_fraction("-1.25").unwrap(), q(-5, 4));
    assert_eq!(parse_fraction("3/4").unwrap(), q(3, 4));
    assert!(parse_fraction("1.").is_err());
    assert_eq!(parse_bounds("1, 1/2").unwrap(), vec![q(1, 1), q(1, 2)]);
    assert!(parse_bounds("").unwrap().is_empty());
}
