// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use spinmem::experiments::{run_scenario, InputSpec, ScenarioConfig, ScenarioKind, ThetaSpec};
use spinmem::protocol::ExchangeModel;

fn random_round_trip() -> ScenarioConfig {
    let mut c = ScenarioConfig::new(ScenarioKind::EncodeDecode);
    c.n = Some(9);
    c.theta = Some(ThetaSpec::PerSiteBand { center: 1.0, width: 0.1 });
    c.inputs = vec![InputSpec::Random(3)];
    c.repeats = 6;
    c.seed = 123;
    c
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = random_round_trip();
    let serial =
        rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_scenario(&cfg)).unwrap();
    let parallel =
        rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| run_scenario(&cfg)).unwrap();
    assert_eq!(serial.rows, parallel.rows);
    assert_eq!(serial.inputs, parallel.inputs);
    assert_eq!(serial.summary, parallel.summary);
}

#[test]
fn each_repeat_draws_fresh_inputs() {
    let r = run_scenario(&random_round_trip()).unwrap();
    assert_eq!(r.inputs.len(), 6);
    assert_ne!(r.inputs[0], r.inputs[1]);
    for draw in &r.inputs {
        for rec in draw {
            let a = rec.amplitudes.unwrap();
            assert!((a.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn fidelities_are_probabilities() {
    for model in [ExchangeModel::Xy, ExchangeModel::Heisenberg] {
        let mut cfg = random_round_trip();
        cfg.model = model;
        let r = run_scenario(&cfg).unwrap();
        for name in ["fidelity_raw", "fidelity_phase_corrected"] {
            let col = r.column_f64(name).unwrap();
            assert!(!col.is_empty());
            assert!(col.iter().all(|f| (-1e-12..=1.0 + 1e-12).contains(f)), "{name}: {col:?}");
        }
    }
}

#[test]
fn invalid_configs_are_rejected_before_running() {
    let mut cfg = random_round_trip();
    cfg.n = Some(0);
    assert_eq!(run_scenario(&cfg).unwrap_err().exit_code(), 1);
    let mut cfg = ScenarioConfig::new(ScenarioKind::DephasingCurve);
    cfg.n = Some(5);
    cfg.decohering_site = Some(9);
    assert!(run_scenario(&cfg).is_err());
}
