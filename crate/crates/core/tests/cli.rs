use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fdslab::control::{format_grid_state, Color, HexGrid, NUM_CELLS};
use fdslab::ncf::{is_ncf_by_definition, BooleanFunctionTable};
use serde_json::Value;
use tempfile::TempDir;

const EXAMPLE1: &str = "field: 3\nf1 = 1 - x1*x2\nf2 = 1 + 2*x2\n";

fn fdslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdslab"))
        .args(args)
        .env_remove("FDSLAB_BOUND")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn assert_schema(name: &str, instance: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}\n{instance:#}");
}

#[test]
fn phase_space_example1() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "ex1.txt", EXAMPLE1);
    let v = json_of(&fdslab(&["phase-space", sys.to_str().unwrap()]));
    assert_schema("phase-space", &v);
    assert_eq!(v["total_states"], 9);
    assert_eq!(v["num_components"], 2);
    assert_eq!(v["cycle_lengths"], serde_json::json!([2, 3]));
}

#[test]
fn deps_example1() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "ex1.txt", EXAMPLE1);
    let v = json_of(&fdslab(&["deps", sys.to_str().unwrap()]));
    assert_schema("deps", &v);
    assert_eq!(
        v["edges"],
        serde_json::json!([["x1", "x1"], ["x2", "x1"], ["x2", "x2"]])
    );
    assert_eq!(v["strongly_connected"], false);
}

#[test]
fn analyze_linear_shear() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.txt", "field: 2\n1 1\n0 1\n");
    let v = json_of(&fdslab(&["analyze-linear", m.to_str().unwrap()]));
    assert_schema("analyze-linear", &v);
    assert_eq!(v["order"], 2);
    assert_eq!(v["num_components"], 3);
}

#[test]
fn ncf_enumeration_matches_definition() {
    for n in 1..=3usize {
        let v = json_of(&fdslab(&["ncf", "--enumerate", &n.to_string()]));
        assert_schema("ncf", &v);
        let oracle = (0..1u64 << (1 << n))
            .filter(|&i| {
                let t = BooleanFunctionTable::from_index(n, i);
                t.depends_on_all() && is_ncf_by_definition(&t).unwrap().is_some()
            })
            .count();
        assert_eq!(v["count"], oracle, "n = {n}");
    }
}

#[test]
fn ncf_detection() {
    let v = json_of(&fdslab(&["ncf", "--polynomial", "x1*(x2+1)*x3", "--vars", "3"]));
    assert_schema("ncf", &v);
    assert_eq!(v["nested_canalyzing"], true);
    assert_eq!(v["certificate"]["canalyzing_inputs"], serde_json::json!([0, 1, 0]));

    let v = json_of(&fdslab(&["ncf", "--table", "0110"]));
    assert_schema("ncf", &v);
    assert_eq!(v["nested_canalyzing"], false);
    assert!(v["certificate"].is_null());
}

fn example1_table_csv() -> String {
    let field = fdslab::Field::prime(3).unwrap();
    let fds = fdslab::io::parse_system(EXAMPLE1, Some(field)).unwrap();
    fdslab::inference::TimeSeries::from_transition_table(&fds, 1000)
        .unwrap()
        .to_csv()
}

#[test]
fn infer_recovers_example1() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "ex1.csv", &example1_table_csv());
    let v = json_of(&fdslab(&["infer", "--field", "3", data.to_str().unwrap()]));
    assert_schema("infer", &v);
    assert_eq!(v["fits_data"], true);

    let model: String = v["model"]
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(i, p)| format!("f{} = {}\n", i + 1, p.as_str().unwrap()))
        .collect();
    let field = fdslab::Field::prime(3).unwrap();
    let inferred = fdslab::io::parse_system(&model, Some(field)).unwrap();
    let truth = fdslab::io::parse_system(EXAMPLE1, None).unwrap();
    for s in 0..9 {
        let x = truth.decode(s);
        assert_eq!(inferred.step(&x).unwrap(), truth.step(&x).unwrap());
    }
}

#[test]
fn infer_requires_field() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "ex1.csv", &example1_table_csv());
    let out = fdslab(&["infer", data.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

fn red_centre_state() -> String {
    let grid = HexGrid::new(10);
    let mut state = vec![Color::White.value(); NUM_CELLS];
    for c in grid.disc(2) {
        state[c] = Color::Red.value();
    }
    format_grid_state(&grid, &state)
}

#[test]
fn control_sim_red_centre() {
    let dir = TempDir::new().unwrap();
    let init = write(&dir, "init.txt", &red_centre_state());
    let traj = dir.path().join("traj.txt");
    let svg = dir.path().join("final.svg");
    let v = json_of(&fdslab(&[
        "control-sim",
        init.to_str().unwrap(),
        "--overhead",
        "2",
        "--trajectory",
        traj.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]));
    assert_schema("control-sim", &v);
    let inoculated: u64 = v["schedule"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_array().unwrap().len() as u64)
        .sum();
    let interventions = v["schedule"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| !s.as_array().unwrap().is_empty())
        .count() as f64;
    assert_eq!(v["inoculated_cells"], inoculated);
    assert_eq!(
        v["total_cost"].as_f64().unwrap(),
        inoculated as f64 + 2.0 * interventions
    );
    assert_eq!(v["goal_reached"], v["final_check"]["goal"]);
    let lines = fs::read_to_string(&traj).unwrap().lines().count();
    assert_eq!(lines as u64, v["steps"].as_u64().unwrap() + 1);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "ex1.csv", &example1_table_csv());
    let args = ["infer", "--field", "3", "--seed", "7", data.to_str().unwrap()];
    let a = fdslab(&args);
    let b = fdslab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let out = dir.path().join("report.json");
    let c = fdslab(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert!(c.status.success());
    assert_eq!(fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "field: 3\nf1 = x1 +* x2\n");
    let out = fdslab(&["phase-space", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("line 2"), "{msg}");

    let missing = dir.path().join("absent.txt");
    assert_eq!(fdslab(&["deps", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(fdslab(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(fdslab(&["ncf", "--table", "012"]).status.code(), Some(2));
}

#[test]
fn bound_is_enforced() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "ex1.txt", EXAMPLE1);
    let out = fdslab(&["phase-space", "--bound", "8", sys.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_fdslab"))
        .args(["phase-space", sys.to_str().unwrap()])
        .env("FDSLAB_BOUND", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_fdslab"))
        .args(["phase-space", "--bound", "9", sys.to_str().unwrap()])
        .env("FDSLAB_BOUND", "8")
        .output()
        .unwrap();
    assert!(out.status.success());
}
