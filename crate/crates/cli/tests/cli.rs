//! Contract tests for the command-line surface: exit codes, artifact
//! layout, file formats, and cross-command consistency.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};
use sunfleet::ingest::scale_irradiance;
use sunfleet::pv::{generation_series, PvArrayConfig};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sunfleet")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn binary")
}

fn run_ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_text(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn sha256_of(path: &Path) -> String {
    let mut h = Sha256::new();
    h.update(fs::read(path).unwrap());
    format!("{:x}", h.finalize())
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["run", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["run"]); // missing required --out
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_region_exits_one_and_names_it() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "run", "--region", "Atlantis",
        "--out", tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("Atlantis"));
}

#[test]
fn unknown_config_key_exits_one_and_names_it() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "frobnicate = 3\n").unwrap();
    let out = run(&[
        "run", "--region", "Paris", "--config", cfg.to_str().unwrap(),
        "--out", tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr_of(&out).contains("frobnicate"),
        "stderr should name the bad key: {}",
        stderr_of(&out)
    );
}

#[test]
fn out_of_range_config_value_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "coverage = 0.9\n").unwrap(); // above the roof limit
    let out = run(&[
        "run", "--region", "Paris", "--config", cfg.to_str().unwrap(),
        "--out", tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("coverage"));
}

#[test]
fn missing_input_file_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "run", "--region", "Paris",
        "--weather", "/definitely/not/here.csv",
        "--out", tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_artifacts_layout_and_input_immutability() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("scenario.toml");
    fs::write(&cfg, "horizon = 2\n").unwrap();
    let cfg_digest = sha256_of(&cfg);

    let out_dir = tmp.path().join("out");
    run_ok(&[
        "run", "--region", "Paris", "--config", cfg.to_str().unwrap(),
        "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(sha256_of(&cfg), cfg_digest, "run mutated its input");

    // flows.csv: header + one full year of hours.
    let flows = read_text(&out_dir, "flows.csv");
    assert_eq!(flows.lines().count(), 8761);
    assert!(flows.starts_with(
        "hour,pv_to_load_kwh,pv_to_battery_kwh,pv_to_grid_kwh,battery_to_load_kwh,grid_to_load_kwh,curtailed_kwh,load_kwh\n"
    ));
    // daily_profile.csv: header + 24 hours.
    assert_eq!(read_text(&out_dir, "daily_profile.csv").lines().count(), 25);

    // indicators.json: both money conventions, labeled euro vintage.
    let ind: serde_json::Value =
        serde_json::from_str(&read_text(&out_dir, "indicators.json")).unwrap();
    assert!(ind["fuel_excluded"].is_object());
    assert!(ind["fuel_included"].is_object());
    assert_eq!(ind["currency"], "2019 euros");
    assert_eq!(ind["system"], "PVOnly");

    // manifest.json: lists every artifact and carries correct digests.
    let manifest: serde_json::Value =
        serde_json::from_str(&read_text(&out_dir, "manifest.json")).unwrap();
    let files: Vec<String> =
        serde_json::from_value(manifest["files"].clone()).unwrap();
    for name in ["indicators.json", "flows.csv", "daily_profile.csv", "manifest.json"] {
        assert!(files.contains(&name.to_string()), "{name} missing from manifest");
    }
    let digests: std::collections::BTreeMap<String, String> =
        serde_json::from_value(manifest["sha256"].clone()).unwrap();
    for (name, digest) in &digests {
        assert_eq!(digest, &sha256_of(&out_dir.join(name)), "{name} digest stale");
    }

    // A rerun reproduces indicators.json byte for byte.
    let out_dir2 = tmp.path().join("out2");
    run_ok(&[
        "run", "--region", "Paris", "--config", cfg.to_str().unwrap(),
        "--out", out_dir2.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read(out_dir.join("indicators.json")).unwrap(),
        fs::read(out_dir2.join("indicators.json")).unwrap()
    );
}

#[test]
fn sweep_grid_rows_optimum_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("scenario.toml");
    // PV-only: with no storage pool, zero coverage means zero production,
    // which must leave the self-consumption cell blank.
    fs::write(&cfg, "horizon = 2\n").unwrap();
    let out_dir = tmp.path().join("out");
    run_ok(&[
        "sweep", "--region", "Paris", "--config", cfg.to_str().unwrap(),
        "--grid", "0:0.71:0.01",
        "--out", out_dir.to_str().unwrap(),
    ]);

    let sweep = read_text(&out_dir, "sweep.csv");
    let mut lines = sweep.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "coverage,capacity_kw,self_consumption,self_sufficiency,energy_sufficiency,\
         npv_savings_eur,cost_saving_pct,co2_reduction_pct,co2_abatement_kg_per_kwh,\
         capacity_factor,npv_savings_fuel_eur,cost_saving_fuel_pct"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 72, "0:0.71:0.01 must produce 72 grid points");

    // Zero coverage produces nothing, so self-consumption is undefined there.
    assert_eq!(rows[0][0], "0");
    assert_eq!(rows[0][2], "", "self-consumption must be blank without production");

    // optimum.json is the argmax row of the fuel-excluded savings column.
    let argmax = rows
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| {
            let x: f64 = a[5].parse().unwrap();
            let y: f64 = b[5].parse().unwrap();
            x.partial_cmp(&y).unwrap()
        })
        .map(|(i, _)| i)
        .unwrap();
    let optimum: serde_json::Value =
        serde_json::from_str(&read_text(&out_dir, "optimum.json")).unwrap();
    assert_eq!(optimum["index"], argmax as u64);
    assert_eq!(
        optimum["coverage"].as_f64().unwrap(),
        rows[argmax][0].parse::<f64>().unwrap()
    );
    assert_eq!(
        optimum["capacity_kw"].as_f64().unwrap(),
        rows[argmax][1].parse::<f64>().unwrap()
    );

    // summary.csv: fixed metric labels, in order.
    let summary = read_text(&out_dir, "summary.csv");
    let labels: Vec<&str> = summary
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(
        labels,
        [
            "Optimal PV capacity",
            "Self-consumption",
            "Self-sufficiency",
            "Energy sufficiency",
            "Cost saving",
            "CO₂ emission reduction",
        ]
    );
}

#[test]
fn preset_list_and_dump() {
    let out = run_ok(&["preset", "list"]);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    for name in ["Paris", "IleDeFrance", "Kyoto"] {
        assert!(text.contains(name), "preset list missing {name}: {text}");
    }

    let tmp = tempfile::tempdir().unwrap();
    run_ok(&["preset", "dump", "Paris", "--out", tmp.path().to_str().unwrap()]);
    let toml_text = read_text(tmp.path(), "paris.toml");
    assert!(
        toml_text.contains("31000000"),
        "paris.toml must carry the rooftop area: {toml_text}"
    );
    // The dump parses back into the bundled profile.
    let parsed: sunfleet::region::RegionProfile = toml::from_str(&toml_text).unwrap();
    assert_eq!(parsed, sunfleet::region::Preset::Paris.profile());
}

#[test]
fn scan_single_cell_matches_generation_module() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    run_ok(&[
        "scan", "--region", "Paris", "--tilts", "40", "--azimuths", "180",
        "--irradiance-scale", "0.8",
        "--out", out_dir.to_str().unwrap(),
    ]);
    let scan = read_text(&out_dir, "scan.csv");
    let mut lines = scan.lines();
    assert_eq!(lines.next().unwrap(), "tilt_deg,180");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "40");
    let cell: f64 = row[1].parse().unwrap();

    let weather =
        scale_irradiance(&sunfleet::synthetic::paris_weather(), 0.8).unwrap();
    let array = PvArrayConfig::new(1.0, 40.0, 180.0).unwrap();
    let expected = generation_series(&weather, &array).annual_sum();
    assert_eq!(cell, expected, "scan cell disagrees with the generation module");
}

#[test]
fn coherence_identical_inputs_fill_the_cone() {
    let tmp = tempfile::tempdir().unwrap();
    let series = tmp.path().join("series.csv");
    // A daily cycle with deterministic jitter, long enough for several
    // octaves but small enough to stay fast.
    let values: Vec<String> = (0..256)
        .map(|t| {
            let t = t as f64;
            let v = (2.0 * std::f64::consts::PI * t / 24.0).sin()
                + 0.3 * ((t * 0.7918).sin() * (t * 0.1321).cos());
            v.to_string()
        })
        .collect();
    fs::write(&series, values.join("\n")).unwrap();

    let out_dir = tmp.path().join("out");
    run_ok(&[
        "coherence",
        "--x", series.to_str().unwrap(),
        "--y", series.to_str().unwrap(),
        "--surrogates", "100", "--seed", "7",
        "--min-period", "4", "--max-period", "64", "--pad", "512",
        "--out", out_dir.to_str().unwrap(),
    ]);

    let coi: Vec<f64> = read_text(&out_dir, "coi.csv")
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(coi.len(), 256);

    let mask_text = read_text(&out_dir, "mask.csv");
    let mut inside = 0usize;
    for line in mask_text.lines().skip(1) {
        let mut cells = line.split(',');
        let period: f64 = cells.next().unwrap().parse().unwrap();
        for (t, cell) in cells.enumerate() {
            if period < coi[t] * (1.0 - 1e-12) {
                inside += 1;
                assert_eq!(
                    cell, "1",
                    "identical inputs must be significant at period {period}, hour {t}"
                );
            }
        }
    }
    assert!(inside > 500, "cone of influence unexpectedly small: {inside}");
}

#[test]
fn bad_grid_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    for grid in ["0:0.5:0", "0.5:0.1:0.1", "nonsense"] {
        let out = run(&[
            "sweep", "--region", "Paris", "--grid", grid,
            "--out", tmp.path().join("o").to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(1), "grid {grid} should be rejected");
    }
}

#[test]
fn threads_zero_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "run", "--region", "Paris", "--threads", "0",
        "--out", tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}
