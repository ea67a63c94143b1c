use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rotorb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotorb")).args(args).output().unwrap()
}

fn run_config(kind: &str, text: &str, dir: &Path) -> Output {
    let cfg = dir.join("config.toml");
    fs::write(&cfg, text).unwrap();
    let out = dir.join("out");
    rotorb(&[kind, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("out/report.json")).unwrap()).unwrap()
}

const PLANAR: &str = r#"
dim = 2
point = [0.25, -0.5]
mode = "peripatetic"

[[generator]]
center = [0.0, 0.0]
angle = "rad 1.0"

[[generator]]
center = [1.0, 0.0]
angle = "pi 1/3"

[budget]
max_len = 0
max_exp = 2
max_points = 10
"#;

#[test]
fn zero_length_orbit_is_the_point_itself() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("orbit", PLANAR, dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["metrics"]["point_count"], 1);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["metrics"]["discreteness"]["min_distance"], Value::Null);
    let csv = fs::read_to_string(dir.path().join("out/cloud.csv")).unwrap();
    assert_eq!(csv, "x,y,word_len\n2.50000000e-1,-5.00000000e-1,0\n");
    let ply = fs::read_to_string(dir.path().join("out/cloud.ply")).unwrap();
    assert!(ply.contains("element vertex 1\n"));
    assert_eq!(r["artifacts"], serde_json::json!(["cloud.csv", "cloud.ply", "report.json"]));
}

#[test]
fn ply_vertex_count_matches_cloud() {
    let dir = tempfile::tempdir().unwrap();
    let text = PLANAR.replace("max_len = 0", "max_len = 3").replace("max_points = 10", "max_points = 1000");
    assert!(run_config("orbit", &text, dir.path()).status.success());
    let n = report(dir.path())["metrics"]["point_count"].as_u64().unwrap();
    assert!(n > 1);
    let ply = fs::read_to_string(dir.path().join("out/cloud.ply")).unwrap();
    assert!(ply.contains(&format!("element vertex {n}\n")));
    let csv = fs::read_to_string(dir.path().join("out/cloud.csv")).unwrap();
    assert_eq!(csv.lines().count() as u64, n + 1);
}

#[test]
fn report_echoes_config_and_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_config("orbit", PLANAR, dir.path()).status.success());
    let r = report(dir.path());
    assert_eq!(r["config"]["point"], serde_json::json!([0.25, -0.5]));
    assert_eq!(r["config"]["generator"][1]["angle"], "pi 1/3");
    for key in ["geometric", "algebraic", "dedup_cell", "confinement", "audit", "hex_slab", "cosine_max_denominator"] {
        assert!(r["tolerances"][key].is_number(), "{key}");
    }
}

#[test]
fn gaps_report_three_distances() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("gaps", "[gaps]\nx = 0.41421356237309515\nn = 1000\n", dir.path());
    assert!(o.status.success());
    let r = report(dir.path());
    assert!(r["metrics"]["runs"][0]["distinct_gaps"].as_u64().unwrap() <= 3);
}

#[test]
fn classify_third_cosine_is_irrational() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_config("classify", "[classify]\nangle = \"acos 1/3 +\"\n", dir.path()).status.success());
    assert_eq!(report(dir.path())["metrics"]["verdict"], "Irrational");
    assert!(run_config("classify", "[classify]\nangle = \"acos -1/2 -\"\n", dir.path()).status.success());
    assert_eq!(report(dir.path())["metrics"]["order"], 3);
}

#[test]
fn config_errors_exit_2_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("orbit", &format!("{PLANAR}\nextra = true\n"), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`extra`"));
    let o = run_config("orbit", &PLANAR.replace("max_exp = 2", "max_exp = \"two\""), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`max_exp`"));
    let o = run_config("orbit", &PLANAR.replace("rad 1.0", "deg 57"), dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("generator[1].angle"));
    let o = rotorb(&["orbit", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, PLANAR).unwrap();
    let o = rotorb(&["orbit", "--config", cfg.to_str().unwrap(), "--out", ""]);
    assert_eq!(o.status.code(), Some(1));
    // a rational generator cannot drive the ladder
    let ladder = PLANAR.replace("mode = \"peripatetic\"", "") + "\n[ladder]\nstages = 2\n";
    let o = run_config("ladder", &ladder, dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, PLANAR).unwrap();
    let out = dir.path().join("o");
    let o = rotorb(&["orbit", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", "42"]);
    assert!(o.status.success());
    let r: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(r["seed"], 42);
}

#[test]
fn tumble_writes_frames() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_config("tumble", "[tumble]\nedge_length = 1.0\nsteps = [\"AB\", \"AB-\"]\n", dir.path());
    assert!(o.status.success());
    let r = report(dir.path());
    assert_eq!(r["metrics"]["frames"], 3);
    assert!(r["metrics"]["max_edge_drift"].as_f64().unwrap() < 1e-9);
    let frames = fs::read_to_string(dir.path().join("out/tumble.csv")).unwrap();
    assert_eq!(frames.lines().count(), 1 + 3 * 5);
}
