use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ris-models"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const RANDOM: &str = r#"
[geometry]
kind = "linear"
n = 40
spacing = 0.5
b = 0.0
area = 0.01

[[incident]]
theta_deg = 20.0

[observation]
grid = { start_deg = -90.0, stop_deg = 90.0, count = 37 }

[config]
scheme = "random"
seed = 5
"#;

#[test]
fn patch_rcs_emits_a_cut() {
    let out = run(&["patch-rcs", "--a", "5", "--b", "5", "--count", "19"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta_deg,phi_deg,field,field_db,rcs,rcs_db"));
    assert_eq!(lines.count(), 19);
}

#[test]
fn negative_angles_are_accepted() {
    let out = run(&[
        "linear-field",
        "--n",
        "8",
        "--theta-i",
        "-30",
        "--steer",
        "-30",
        "40",
        "--count",
        "5",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "random.toml", RANDOM);
    let a = run(&["sweep", &path]);
    let b = run(&["sweep", &path]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["sweep", &path, "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn monte_carlo_sweep_via_trials_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "random.toml", RANDOM);
    let out = run(&["sweep", &path, "--trials", "50", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["monte_carlo"].as_array().unwrap().len(), 37);
}

#[test]
fn invalid_scenario_exits_with_two_and_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = RANDOM.replace("theta_deg = 20.0", "theta_deg = 120.0");
    let out = run(&["sweep", &write(dir.path(), "bad.toml", &bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("theta_deg"));

    let typo = RANDOM.replace("spacing = 0.5", "spcing = 0.5");
    let out = run(&["sweep", &write(dir.path(), "typo.toml", &typo)]);
    assert_eq!(code(&out), 2);
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("line 5, column 1"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn unknown_figure_exits_with_two() {
    let out = run(&["reproduce", "fig99"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn ill_conditioned_reshape_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("theta_deg,re,im\n");
    for i in 0..16 {
        let re = if i % 2 == 0 { 1e-4 } else { -1e-4 };
        csv.push_str(&format!("{},{re},0\n", 10.0 + 1e-7 * i as f64));
    }
    write(dir.path(), "desired.csv", &csv);
    let scenario = r#"
[geometry]
kind = "linear"
n = 16
spacing = 0.5
b = 0.0
area = 0.01

[[incident]]
theta_deg = 20.0

[observation]
grid = { start_deg = -90.0, stop_deg = 90.0, count = 19 }

[config]
scheme = "reshape"
desired_pattern_file = "desired.csv"
"#;
    let out = run(&["configure", &write(dir.path(), "reshape.toml", scenario)]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn configure_lists_one_weight_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["configure", &write(dir.path(), "random.toml", RANDOM)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 41);
    assert!(text.starts_with("n,area,phase_deg,re,im\n"));
}

#[test]
fn mimo_on_the_sine_grid_round_trips() {
    let out = run(&["mimo", "--n", "8", "--theta-i", "30", "--theta-i", "70", "--dft", "8"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let sys = ris_models::mimo::MimoSystem::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!((sys.cells(), sys.incident(), sys.observations()), (8, 2, 8));
}

#[test]
fn reproduce_writes_data_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_string_lossy().into_owned();
    let out = run(&["reproduce", "fig6", "--out", &out_dir]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["fig6_d05.csv", "fig6_d07.csv", "fig6_manifest.json"] {
        assert!(dir.path().join(file).exists(), "{file} missing");
    }
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("fig6_manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["all_checks_passed"], true);
    assert_eq!(manifest["scenario_sha256"].as_str().unwrap().len(), 64);
}
