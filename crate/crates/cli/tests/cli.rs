//! End-to-end tests of the `jetav` binary: exit codes, determinism and the
//! bundled fixtures.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jetav"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn jetav")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_p1_over_m_range_passes() {
    let out = run(&["verify", "p1", "--m-range", "-2..3", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("[PASS] p1"));
}

#[test]
fn verify_iso_with_flags_passes() {
    let out = run(&[
        "verify", "iso", "--order", "4", "--seed", "7", "--samples", "12",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = run(&["verify", "unknown-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_are_usage_errors() {
    let out = run(&["verify", "p1", "--order", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "p1", "--m-range", "3..-2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn structured_reports_are_deterministic() {
    let args = [
        "verify",
        "coproduct",
        "--order",
        "3",
        "--samples",
        "8",
        "--seed",
        "11",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical");
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["seed"], 11);
    assert_eq!(report["passed"], true);
}

#[test]
fn seed_env_variable_is_the_default() {
    let out = bin()
        .args(["verify", "algebra", "--samples", "6", "--format", "json"])
        .env("JETAV_SEED", "99")
        .output()
        .expect("spawn jetav");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["seed"], 99);
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = std::env::temp_dir().join(format!("jetav-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("report.json");
    let out = run(&[
        "verify",
        "algebra",
        "--samples",
        "6",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn fixtures_parse_validate_and_round_trip() {
    for (file, params) in [
        ("rho_m.json", Some("m=1")),
        ("sigma_m.json", Some("m=-2")),
        ("k_tr.json", None),
        ("weight_k.json", Some("k=3")),
        ("p1.json", None),
    ] {
        let path = fixtures().join(file);
        let mut args = vec!["parse".to_string(), path.to_str().unwrap().to_string()];
        if let Some(p) = params {
            args.push("--param".into());
            args.push(p.into());
        }
        let arg_refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&arg_refs);
        assert_eq!(out.status.code(), Some(0), "{file}: {}", stdout(&out));
        assert!(stdout(&out).contains("[PASS]"), "{file}");

        // canonical re-serialization parses to the same canonical form
        let mut json_args = arg_refs.clone();
        json_args.push("--format");
        json_args.push("json");
        let first = run(&json_args);
        assert_eq!(first.status.code(), Some(0));
        let dir = std::env::temp_dir().join(format!("jetav-rt-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let reserialized = dir.join(file);
        std::fs::write(&reserialized, &first.stdout).unwrap();
        let mut second_args = vec![
            "parse".to_string(),
            reserialized.to_str().unwrap().to_string(),
            "--format".into(),
            "json".into(),
        ];
        if let Some(p) = params {
            second_args.push("--param".into());
            second_args.push(p.into());
        }
        let second_refs: Vec<&str> = second_args.iter().map(String::as_str).collect();
        let second = run(&second_refs);
        assert_eq!(second.status.code(), Some(0), "{file} round trip");
        assert_eq!(first.stdout, second.stdout, "{file} round trip changed");
        std::fs::remove_dir_all(&dir).ok();
    }
}

#[test]
fn invalid_atlas_fails_validation_with_exit_one() {
    let dir = std::env::temp_dir().join(format!("jetav-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_atlas.json");
    // H(G(y)) = y + 2 != y: the validator must report the residual
    std::fs::write(
        &path,
        r#"{
  "kind": "atlas",
  "name": "broken",
  "charts": [
    { "name": "x", "coords": ["x"] },
    { "name": "y", "coords": ["y"] }
  ],
  "transitions": [
    { "from": "y", "to": "x", "maps": ["y + 1"], "inverse_maps": ["x + 1"] }
  ]
}"#,
    )
    .unwrap();
    let out = run(&["parse", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("mismatch"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn compute_exponential_task() {
    let task = fixtures().join("tasks/exp_example.json");
    let out = run(&["compute", task.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "X -> X + 2*X^2 + 4*X^3 + 8*X^4");
}

#[test]
fn compute_glue_matrix_task() {
    let task = fixtures().join("tasks/glue_rho1.json");
    let out = run(&["compute", task.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("[1/y^4, -1/y^3; 0, 1/y^2]"), "{text}");
    assert!(text.contains("e_1^x = (1/y^4) e_1^y"), "{text}");
    assert!(
        text.contains("e_2^x = (-1/y^3) e_1^y + (1/y^2) e_2^y"),
        "{text}"
    );
}

#[test]
fn compute_transform_task() {
    let task = fixtures().join("tasks/transform_x2.json");
    let out = run(&["compute", task.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "((1/y^2)*Y^2) d/dY");
}

#[test]
fn malformed_task_is_a_parse_error() {
    let dir = std::env::temp_dir().join(format!("jetav-mal-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ \"task\": \"exp\", \"order\": ").unwrap();
    let out = run(&["compute", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn suite_list_is_printed() {
    let out = run(&["verify", "ignored", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["iso", "jets-group", "coproduct", "geometry", "jet-av", "rudakov", "p1"] {
        assert!(text.contains(name), "missing suite {name}");
    }
}
