// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spinmem::experiments::{config_hash, ScenarioResult};

fn spinmem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinmem")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read_json(path: &Path) -> ScenarioResult {
    ScenarioResult::from_json(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn encode_decode_json_has_tomograms_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    let out = spinmem(&[
        "encode-decode",
        "--inputs",
        "bell-psi-minus",
        "--n",
        "8",
        "--theta",
        "1.1",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    stdout(&out);
    let r = read_json(&path);
    assert_eq!(r.provenance.config_hash, config_hash(&r.config).unwrap());
    assert_eq!(r.provenance.seed, 0);
    let joint = r.summary["joint_infidelity"];
    assert!(joint > 0.0 && joint < 1e-3, "{joint}");
    let names: Vec<&str> = r.tomograms.iter().map(|t| t.name.as_str()).collect();
    assert!(names.iter().any(|n| n.contains("input")), "{names:?}");
    for t in &r.tomograms {
        let (re, im) = (&t.tomogram.real_part, &t.tomogram.imag_part);
        assert_eq!(re.len(), t.tomogram.dim);
        assert_eq!(t.tomogram.basis_labels.len(), t.tomogram.dim);
        assert!(im.iter().flatten().all(|x| x.is_finite()));
    }
    assert_eq!(r.inputs.len(), 1);
}

#[test]
fn csv_columns_per_subcommand() {
    let cases: [(&[&str], &str); 5] = [
        (&["moments", "--levels", "0,1,2"], "l,mean,std,seed"),
        (&["dephasing", "--n", "12", "--tau-steps", "4"], "tau_s,fidelity_raw,fidelity_phase_corrected,seed"),
        (&["distribution", "--n", "6", "--levels", "0,1"], "l,k,p_analytic,p_simulated,"),
        (
            &["chi-sweep", "--n-grid", "10", "--chi-steps", "2"],
            "n,chi,theta_enc,fidelity_raw,fidelity_phase_corrected,seed",
        ),
        (
            &["theta-variation", "--n", "6", "--inputs", "random(2)", "--repeats", "2"],
            "target,retrieval_order,fidelity_raw,fidelity_phase_corrected,infidelity,seed",
        ),
    ];
    for (args, header) in cases {
        let text = stdout(&spinmem(args));
        let first = text.lines().next().unwrap();
        assert!(first.starts_with(header), "{args:?}: {first}");
        let width = first.split(',').count();
        assert!(text.lines().skip(1).all(|l| l.split(',').count() == width));
        assert!(text.lines().count() > 1);
    }
}

#[test]
fn dephasing_grid_length() {
    let text = stdout(&spinmem(&["dephasing", "--n", "10", "--tau-max", "1e-6", "--tau-steps", "50"]));
    assert_eq!(text.lines().count(), 52);
}

#[test]
fn same_seed_same_output() {
    let args =
        ["encode-decode", "--inputs", "random(2)", "--n", "7", "--theta", "1.0", "--repeats", "3", "--seed", "9"];
    let a = stdout(&spinmem(&args));
    let b = stdout(&spinmem(&args));
    assert_eq!(a, b);
    let mut other = args;
    other[10] = "10";
    assert_ne!(a, stdout(&spinmem(&other)));
}

#[test]
fn scenario_config_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    stdout(&spinmem(&[
        "theta-variation",
        "--n",
        "6",
        "--theta",
        "1.0",
        "--width",
        "0.05",
        "--repeats",
        "2",
        "--seed",
        "4",
        "--format",
        "json",
        "--out",
        first.to_str().unwrap(),
    ]));
    let r1 = read_json(&first);
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, serde_json::to_string_pretty(&r1.config).unwrap()).unwrap();
    let second = dir.path().join("second.json");
    stdout(&spinmem(&[
        "scenario",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        second.to_str().unwrap(),
    ]));
    let r2 = read_json(&second);
    assert_eq!(r1.config, r2.config);
    assert_eq!(r1.rows, r2.rows);
    assert_eq!(r1.provenance.config_hash, r2.provenance.config_hash);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"kind\": \"moments\",\n  \"thetaa\": 1.0\n}\n").unwrap();
    let out = spinmem(&["scenario", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(spinmem(&["moments", "--theta", "0.0001"]).status.code(), Some(2));
    assert_eq!(spinmem(&["moments", "--out", "/nonexistent/dir/x.csv"]).status.code(), Some(3));
    assert_eq!(spinmem(&["scenario", "--config", "/nonexistent/config.json"]).status.code(), Some(3));
    assert_eq!(spinmem(&["encode-decode", "--bogus"]).status.code(), Some(1));
    assert_eq!(spinmem(&["--help"]).status.code(), Some(0));
}
