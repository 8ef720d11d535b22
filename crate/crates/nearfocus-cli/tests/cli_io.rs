//! End-to-end tests of the `nearfocus` binary: artifact shapes, layering,
//! determinism, and error reporting, all through the real executable.

use nearfocus_cli::output::read_trace_artifact;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nearfocus"))
        .args(args)
        .output()
        .expect("the binary should spawn")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run_cli(args);
    assert!(
        out.status.success(),
        "command {:?} failed:\n{}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read_bytes(dir: &Path, name: &str) -> Vec<u8> {
    fs::read(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

#[test]
fn zsweep_reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        run_ok(&[
            "zsweep",
            "--preset",
            "fig2b",
            "--format",
            "json",
            "--out",
            dir.to_str().unwrap(),
        ]);
    }
    for name in [
        "fig2b_exact.json",
        "fig2b_closed_form.json",
        "fig2b.run.json",
    ] {
        assert_eq!(
            read_bytes(a.path(), name),
            read_bytes(b.path(), name),
            "{name} differs between identical runs"
        );
    }
}

#[test]
fn monte_carlo_reruns_with_the_same_seed_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        run_ok(&[
            "noise",
            "--preset",
            "fig5",
            "--mc",
            "--trials",
            "64",
            "--grid-points",
            "16",
            "--seed",
            "7",
            "--out",
            dir.to_str().unwrap(),
        ]);
    }
    for name in [
        "fig5_sigma0p2_noisy_mc.csv",
        "fig5_sigma0p5_noisy_mc.csv",
        "fig5_sigma1_noisy_mc.csv",
        "fig5.run.json",
    ] {
        assert_eq!(
            read_bytes(a.path(), name),
            read_bytes(b.path(), name),
            "{name} differs between identical seeded runs"
        );
    }
}

#[test]
fn csv_traces_have_the_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "zsweep",
        "--preset",
        "fig2b",
        "--models",
        "exact",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let text = String::from_utf8(read_bytes(dir.path(), "fig2b_exact.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l_m,l_over_lambda,power_w,model"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 400, "one row per grid point");

    let mut previous_l = 0.0;
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 4, "malformed row {row}");
        let l: f64 = fields[0].parse().unwrap();
        let l_over_lambda: f64 = fields[1].parse().unwrap();
        let power: f64 = fields[2].parse().unwrap();
        assert!(l > previous_l, "distances must increase ({row})");
        assert!((l_over_lambda * 0.0009993333333333334 - l).abs() < 1e-12);
        assert!(power.is_finite() && power >= 0.0);
        assert_eq!(fields[3], "exact");
        previous_l = l;
    }
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn json_artifacts_reload_bit_exact_and_match_the_library() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "zsweep",
        "--preset",
        "fig2b",
        "--models",
        "exact",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let artifact = read_trace_artifact(&dir.path().join("fig2b_exact.json")).unwrap();
    let trace = artifact.to_trace().unwrap();
    assert_eq!(trace.grid().len(), 400);

    // Recompute the physics from the embedded configuration; every value
    // must survive the JSON round trip bit-for-bit.
    let array = nearfocus::geometry::ArrayConfig::new(
        artifact.config.side,
        artifact.config.spacing_m,
        artifact.config.wavelength_m,
    )
    .unwrap();
    let scenario =
        nearfocus::geometry::FocusScenario::new(artifact.config.focal_m, artifact.config.power_w)
            .unwrap();
    let engine = nearfocus::field::FocusedArray::new(array, scenario);
    for (&l, &value) in trace.grid().iter().zip(trace.values()) {
        let recomputed = engine.received_power(l).unwrap();
        assert_eq!(
            value.to_bits(),
            recomputed.to_bits(),
            "value at l = {l} lost precision in the artifact"
        );
    }
}

#[test]
fn flags_override_config_files_which_override_presets() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("panel.conf");
    fs::write(&config_path, "side = 5\ngrid_points = 12\n").unwrap();

    // Config file overrides the preset's side = 7...
    run_ok(&[
        "zsweep",
        "--preset",
        "fig2b",
        "--config",
        config_path.to_str().unwrap(),
        "--models",
        "exact",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let artifact = read_trace_artifact(&dir.path().join("fig2b_exact.json")).unwrap();
    assert_eq!(artifact.config.side, 5);
    assert_eq!(artifact.config.grid_points, 12);

    // ...and a flag overrides both.
    run_ok(&[
        "zsweep",
        "--preset",
        "fig2b",
        "--config",
        config_path.to_str().unwrap(),
        "--side",
        "9",
        "--models",
        "exact",
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let artifact = read_trace_artifact(&dir.path().join("fig2b_exact.json")).unwrap();
    assert_eq!(artifact.config.side, 9);
    assert_eq!(artifact.config.grid_points, 12);
}

#[test]
fn config_file_errors_carry_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.conf");
    fs::write(&config_path, "side = 7\n# fine so far\nsidecount = 9\n").unwrap();
    let out = run_cli(&[
        "zsweep",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("bad.conf:3") && stderr.contains("sidecount"),
        "stderr should point at the offending line: {stderr}"
    );
}

#[test]
fn stochastic_runs_without_a_seed_fail_naming_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_cli(&[
        "emulate",
        "--preset",
        "fig2b",
        "--shadow-sigma",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("seed"),
        "stderr must name the seed: {stderr}"
    );
    assert_eq!(
        fs::read_dir(dir.path()).unwrap().count(),
        0,
        "a failed run must not leave files behind"
    );
}

#[test]
fn unknown_presets_list_the_catalogue() {
    let out = run_cli(&["zsweep", "--preset", "fig9z"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("fig9z") && stderr.contains("fig2a") && stderr.contains("fig7"),
        "stderr should list available presets: {stderr}"
    );
}

#[test]
fn compare_reports_zero_error_for_identical_traces() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "zsweep",
        "--preset",
        "fig2b",
        "--models",
        "exact",
        "--format",
        "json",
        "--grid-points",
        "24",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let artifact = dir.path().join("fig2b_exact.json");
    let out = run_ok(&[
        "compare",
        artifact.to_str().unwrap(),
        artifact.to_str().unwrap(),
    ]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["reference_tag"], "exact");
    assert_eq!(report["max_relative_error"], 0.0);
    assert_eq!(report["rms_relative_error"], 0.0);
    assert_eq!(report["peak_shift"], 0.0);
}

#[test]
fn emulated_traces_are_peak_normalized() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "emulate",
        "--preset",
        "fig2b",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let text = String::from_utf8(read_bytes(dir.path(), "fig2b_emulated.csv")).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|row| row.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(
        max, 1.0,
        "the emulated trace must be normalized to its peak"
    );
    assert_eq!(
        text.lines().next().unwrap(),
        "l_m,l_over_lambda,power_norm,model",
        "normalized traces use the power_norm column"
    );
}

#[test]
fn preset_case_fanout_writes_one_artifact_per_case() {
    let dir = tempfile::tempdir().unwrap();
    // Shrink fig2c drastically so the test stays fast: the fan-out logic is
    // what matters here, not the 700-element panel.
    run_ok(&[
        "zsweep",
        "--preset",
        "fig2c",
        "--side",
        "3",
        "--grid-points",
        "8",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    for name in [
        "fig2c_side35_exact.csv",
        "fig2c_side700_exact.csv",
        "fig2c_side35.run.json",
        "fig2c_side700.run.json",
    ] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    // The --side flag overrides both case overlays, so the two artifacts
    // describe the same panel and must agree byte-for-byte except the stem.
    assert_eq!(
        read_bytes(dir.path(), "fig2c_side35_exact.csv"),
        read_bytes(dir.path(), "fig2c_side700_exact.csv")
    );
}

#[test]
fn run_sidecars_list_the_written_files() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(&[
        "deviation",
        "--preset",
        "fig6",
        "--grid-points",
        "10",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let sidecar: serde_json::Value =
        serde_json::from_slice(&read_bytes(dir.path(), "fig6.run.json")).unwrap();
    assert_eq!(sidecar["command"], "deviation");
    let files: Vec<String> = sidecar["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap().to_string())
        .collect();
    assert_eq!(files.len(), 4, "one artifact per deviation magnitude");
    for file in &files {
        assert!(dir.path().join(file).exists(), "{file} listed but missing");
    }
    assert!(files[1].contains("dev0p25lam"), "{:?}", files);
}
