use std::path::Path;
use std::process::{Command, Output};

fn atomloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atomloc")).args(args).env_remove("ATOMLOC_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_fig2d_passes() {
    let out = atomloc(&["verify", "--scenario", "fig2d", "--samples", "25", "--tol", "1e-6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let dev: f64 = text.split("max deviation ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(dev <= 1e-6);
}

#[test]
fn verify_above_tolerance_exits_2() {
    let out = atomloc(&["verify", "--scenario", "fig2d", "--samples", "3", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_scenario_exits_1() {
    let out = atomloc(&["grid", "--scenario", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
}

#[test]
fn invalid_scenario_file_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let mut file = atomloc::scenario::preset("fig2d").unwrap().to_file();
    file.p = 0.3;
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let out = atomloc(&["grid", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("interference"));
}

#[test]
fn unknown_flag_prints_usage_and_exits_64() {
    let out = atomloc(&["peaks", "--grid", "x.csv", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn figure_fig3d_writes_four_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = atomloc(&["figure", "fig3d", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for name in ["fig3d.csv", "fig3d.ppm", "fig3d_peaks.json", "fig3d.gp"] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    assert!(stdout(&out).starts_with("fig3d: 1 peak(s), pattern spike(1)"));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("fig3d_peaks.json")).unwrap()).unwrap();
    assert_eq!(report["peaks"].as_array().unwrap().len(), 1);
    assert_eq!(report["pattern"], "spike(1)");
}

#[test]
fn grid_peaks_render_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let ppm = dir.path().join("g.ppm");
    let csv_s = csv.to_str().unwrap();
    let out = atomloc(&["grid", "--scenario", "fig2d", "--nx", "101", "--ny", "101", "--out", csv_s]);
    assert_eq!(out.status.code(), Some(0));
    let out = atomloc(&["peaks", "--grid", csv_s, "--threshold", "0.5", "--min-sep", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["peaks"].as_array().unwrap().len(), 2);
    let out = atomloc(&["render", "--grid", csv_s, "--out", ppm.to_str().unwrap(), "--colormap", "hot"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read(&ppm).unwrap().starts_with(b"P6\n101 101\n255\n"));
    assert!(Path::new(&csv).is_file());
}

#[test]
fn json_grid_keeps_parameters() {
    let out = atomloc(&["grid", "--scenario", "fig5a", "--nx", "9", "--ny", "9", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["init"]["xi"], 0.0);
    assert_eq!(doc["values"].as_array().unwrap().len(), 81);
}
