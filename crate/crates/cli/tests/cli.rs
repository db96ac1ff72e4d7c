//! End-to-end checks of the `tagcoil` binary: exit codes, artifact
//! contracts, and byte determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn work_dir(test: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(test);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn tagcoil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tagcoil"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn analyze_square_fixture() {
    let dir = work_dir("analyze_square");
    let out = tagcoil(&[
        "analyze",
        fixture("antenna2.toml").to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("1.6163 uH"));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("antenna2_report.json")).unwrap())
            .unwrap();
    let l = json["inductance_uh"].as_f64().unwrap();
    assert!((l - 1.616).abs() / 1.616 < 0.005, "L = {l}");
    assert_eq!(json["tuning"]["topology"], "parallel");
    assert_eq!(json["derived"]["d_mean_mm"].as_f64().unwrap(), 74.2);
    assert!(dir.join("antenna2_report.txt").exists());
}

#[test]
fn analyze_rectangle_fixture() {
    let dir = work_dir("analyze_rect");
    let out = tagcoil(&[
        "analyze",
        fixture("antenna1.toml").to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("antenna1_report.json")).unwrap())
            .unwrap();
    let l = json["inductance_uh"].as_f64().unwrap();
    assert!((l - 4.4043).abs() / 4.4043 < 0.005, "L = {l}");
    assert_eq!(json["tuning"]["topology"], "series");
    let warnings = json["warnings"].as_array().unwrap();
    assert!(warnings
        .iter()
        .any(|w| w.as_str().unwrap().contains("rectangular")));
}

#[test]
fn tune_uses_measured_inductance() {
    let dir = work_dir("tune_measured");
    let out = tagcoil(&[
        "tune",
        fixture("antenna1.toml").to_str().unwrap(),
        "--target-mhz",
        "13.56",
        "--snap",
        "exact",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("series"), "stdout: {text}");
    assert!(text.contains("65.8 pF"), "stdout: {text}");

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("antenna1_tuning.json")).unwrap())
            .unwrap();
    assert_eq!(json["topology"], "series");
    let pf = json["c_tune_pf"].as_f64().unwrap();
    assert!((pf - 65.76).abs() < 0.05, "c_tune = {pf}");
}

#[test]
fn missing_document_is_usage_error_without_artifacts() {
    let dir = work_dir("missing_doc");
    let out = tagcoil(&[
        "analyze",
        dir.join("missing.toml").to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 0);
}

#[test]
fn unknown_key_is_usage_error() {
    let dir = work_dir("unknown_key");
    let doc = dir.join("bad.toml");
    std::fs::write(
        &doc,
        "[geometry]\nshape = \"square\"\nouter_length_mm = 80.0\nouter_width_mm = 80.0\n\
         turns = 3\ntrace_width_mm = 0.6\nturn_spacing_mm = 2.0\nconductor_thickness_mm = 0.0175\n\
         bogus_key = 1\n",
    )
    .unwrap();
    let out = tagcoil(&[
        "analyze",
        doc.to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
}

#[test]
fn infeasible_geometry_is_domain_error() {
    let dir = work_dir("domain_error");
    let doc = dir.join("crowded.toml");
    std::fs::write(
        &doc,
        "[geometry]\nshape = \"square\"\nouter_length_mm = 80.0\nouter_width_mm = 80.0\n\
         turns = 17\ntrace_width_mm = 0.6\nturn_spacing_mm = 2.0\nconductor_thickness_mm = 0.0175\n",
    )
    .unwrap();
    let out = tagcoil(&[
        "analyze",
        doc.to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("InnerOpeningNonPositive"));
    // the failed analysis must not leave partial artifacts
    assert_eq!(
        std::fs::read_dir(&dir)
            .unwrap()
            .filter(|e| e.as_ref().unwrap().path() != doc)
            .count(),
        0
    );
}

#[test]
fn sweep_csv_contract() {
    let dir = work_dir("sweep_csv");
    let out = tagcoil(&[
        "sweep",
        fixture("antenna2.toml").to_str().unwrap(),
        "--from-mhz",
        "1",
        "--to-mhz",
        "30",
        "--points",
        "101",
        "--svg",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let csv = std::fs::read_to_string(dir.join("antenna2_sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "frequency_hz,re_ohm,im_ohm");
    assert_eq!(lines.count(), 101);
    // as built: 1.62 uH with the soldered 30 pF in parallel -> 13.98 MHz
    assert!(
        stdout(&out).contains("resonance near 13.98"),
        "{}",
        stdout(&out)
    );
    assert!(dir.join("antenna2_sweep.svg").exists());
}

#[test]
fn sweep_recovers_as_built_resonances() {
    let dir = work_dir("sweep_as_built");
    let out = tagcoil(&[
        "sweep",
        fixture("antenna1.toml").to_str().unwrap(),
        "--from-mhz",
        "1",
        "--to-mhz",
        "30",
        "--points",
        "2001",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    // measured 4.85 uH with the soldered 56 pF in series -> 14.06 MHz
    assert!(
        stdout(&out).contains("resonance near 14.06"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn sweep_bad_band_is_domain_error() {
    let dir = work_dir("sweep_bad");
    let out = tagcoil(&[
        "sweep",
        fixture("antenna2.toml").to_str().unwrap(),
        "--from-mhz",
        "30",
        "--to-mhz",
        "1",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("BadRange"));
}

#[test]
fn synthesize_ranks_candidates() {
    let dir = work_dir("synthesize");
    let out = tagcoil(&[
        "synthesize",
        fixture("antenna2.toml").to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("antenna2_candidates.json")).unwrap(),
    )
    .unwrap();
    let rows = json.as_array().unwrap();
    assert!(!rows.is_empty());
    assert_eq!(rows[0]["turns"], 3);
    assert!(rows[0]["relative_error"].as_f64().unwrap() < 0.05);
}

#[test]
fn synthesize_unreachable_target_is_empty() {
    let dir = work_dir("synthesize_empty");
    let doc = dir.join("moon.toml");
    std::fs::write(
        &doc,
        "[geometry]\nshape = \"square\"\nouter_length_mm = 80.0\nouter_width_mm = 80.0\n\
         turns = 3\ntrace_width_mm = 0.6\nturn_spacing_mm = 2.0\nconductor_thickness_mm = 0.0175\n\
         [target]\nmode = \"inductance\"\ninductance_uh = 1000000.0\n",
    )
    .unwrap();
    let out = tagcoil(&[
        "synthesize",
        doc.to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("no feasible candidate"));
    let json = std::fs::read_to_string(dir.join("moon_candidates.json")).unwrap();
    assert_eq!(json.trim(), "[]");
}

#[test]
fn export_emits_both_mask_formats() {
    let dir = work_dir("export");
    let out = tagcoil(&[
        "export",
        fixture("antenna1.toml").to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let gerber = std::fs::read_to_string(dir.join("antenna1.gbr")).unwrap();
    assert!(gerber.contains("%MOMM*%"));
    assert!(gerber.contains("%ADD10C,0.500*%"));
    assert!(gerber.trim_end().ends_with("M02*"));
    let svg = std::fs::read_to_string(dir.join("antenna1.svg")).unwrap();
    assert!(svg.contains("<path"));
}

#[test]
fn range_reproduces_reference_calibration() {
    let dir = work_dir("range");
    let out = tagcoil(&[
        "range",
        fixture("antenna2.toml").to_str().unwrap(),
        "--points",
        "10",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("estimated read range: 5.0 cm"));
    let csv = std::fs::read_to_string(dir.join("antenna2_range.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "z_m,mutual_h,emf_v");
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn artifacts_are_byte_deterministic() {
    let dir_a = work_dir("determinism_a");
    let dir_b = work_dir("determinism_b");
    let doc = fixture("antenna2.toml");
    let doc = doc.to_str().unwrap();
    for dir in [&dir_a, &dir_b] {
        let out = dir.to_str().unwrap();
        for args in [
            vec!["analyze", doc, "--out-dir", out],
            vec!["export", doc, "--out-dir", out],
            vec![
                "sweep",
                doc,
                "--from-mhz",
                "1",
                "--to-mhz",
                "30",
                "--points",
                "51",
                "--svg",
                "--out-dir",
                out,
            ],
        ] {
            assert_eq!(exit_code(&tagcoil(&args)), 0);
        }
    }
    let mut names: Vec<String> = std::fs::read_dir(&dir_a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 6);
    for name in names {
        let a = std::fs::read(dir_a.join(&name)).unwrap();
        let b = std::fs::read(dir_b.join(&name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}
