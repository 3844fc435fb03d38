// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use proptest::prelude::*;
use spinmem::engine::{
    dense_interaction_matrix, DensityMatrix, QubitLabel, QubitRegister, RestrictedState, StateVector,
};
use spinmem::protocol::{interaction_unitary, ExchangeModel, TwoSpinGate};

fn model() -> impl Strategy<Value = ExchangeModel> {
    prop_oneof![Just(ExchangeModel::Xy), Just(ExchangeModel::Heisenberg)]
}

fn amplitudes(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map("zero vector", |v| {
        let v: Vec<Complex64> = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        (n > 1e-3).then(|| v.into_iter().map(|a| a / n).collect())
    })
}

fn random_state(register: QubitRegister) -> impl Strategy<Value = StateVector> {
    let dim = 1usize << register.len();
    amplitudes(dim).prop_map(move |a| StateVector::from_amplitudes(register.clone(), a).unwrap())
}

fn gate(theta: f64, model: ExchangeModel) -> spinmem::engine::Gate4 {
    interaction_unitary(&TwoSpinGate::new(theta, model).unwrap())
}

fn excitations(state: &StateVector) -> f64 {
    (0..state.dim()).map(|i| state.amplitude(i).norm_sqr() * i.count_ones() as f64).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm_and_excitation_number(
        psi in random_state(QubitRegister::memory(2, 4)),
        theta in 0.0f64..3.2,
        model in model(),
        sites in prop::collection::vec((1usize..=2, 1usize..=4), 1..8),
    ) {
        let n0 = excitations(&psi);
        let mut s = psi;
        for (f, k) in sites {
            s.apply_two_qubit_gate(&gate(theta, model), QubitLabel::Flying(f), QubitLabel::Chain(k)).unwrap();
        }
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        prop_assert!((excitations(&s) - n0).abs() < 1e-12);
    }

    #[test]
    fn strided_kernel_matches_dense_matrix(
        n in 1usize..=5,
        seed_amps in amplitudes(64),
        theta in 0.0f64..3.2,
        model in model(),
        site_pick in 0usize..5,
    ) {
        let site = 1 + site_pick % n;
        let dim = 1usize << (n + 1);
        let norm = seed_amps[..dim].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let amps: Vec<Complex64> = seed_amps[..dim].iter().map(|a| a / norm).collect();
        let mut s = StateVector::from_amplitudes(QubitRegister::memory(1, n), amps.clone()).unwrap();
        s.apply_two_qubit_gate(&gate(theta, model), QubitLabel::Flying(1), QubitLabel::Chain(site)).unwrap();
        let dense = dense_interaction_matrix(n, site, theta, model).unwrap();
        let expected = dense * nalgebra::DVector::from_vec(amps);
        for i in 0..dim {
            prop_assert!((s.amplitude(i) - expected[i]).norm() < 1e-13);
        }
    }

    #[test]
    fn restricted_sector_tracks_full_simulation(
        a in amplitudes(6),
        theta in 0.0f64..3.2,
        model in model(),
        sites in prop::collection::vec((1usize..=2, 1usize..=3), 1..10),
    ) {
        let reg = QubitRegister::memory(2, 3);
        let mut r = RestrictedState::from_amplitudes(reg, a).unwrap();
        let mut full = r.lift().unwrap();
        for (f, k) in sites {
            let (qa, qb) = (QubitLabel::Flying(f), QubitLabel::Chain(k));
            r.apply_two_qubit_gate(&gate(theta, model), qa, qb).unwrap();
            full.apply_two_qubit_gate(&gate(theta, model), qa, qb).unwrap();
        }
        let lifted = r.lift().unwrap();
        for i in 0..full.dim() {
            prop_assert!((lifted.amplitude(i) - full.amplitude(i)).norm() < 1e-13);
        }
        let dr = DensityMatrix::from_restricted(&r).partial_trace(&[QubitLabel::Flying(2), QubitLabel::Chain(1)]).unwrap();
        let df = full.reduced_density(&[QubitLabel::Flying(2), QubitLabel::Chain(1)]).unwrap();
        prop_assert!((dr.matrix() - df.matrix()).norm() < 1e-12);
    }

    #[test]
    fn reduced_state_ignores_gates_on_traced_qubits(
        psi in random_state(QubitRegister::memory(2, 3)),
        theta in 0.0f64..3.2,
        model in model(),
    ) {
        let keep = [QubitLabel::Flying(1), QubitLabel::Chain(1)];
        let before = psi.reduced_density(&keep).unwrap();
        let mut s = psi;
        s.apply_two_qubit_gate(&gate(theta, model), QubitLabel::Flying(2), QubitLabel::Chain(3)).unwrap();
        let after = s.reduced_density(&keep).unwrap();
        prop_assert!((before.matrix() - after.matrix()).norm() < 1e-12);
        prop_assert!((after.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(after.hermiticity_error() < 1e-13);
        prop_assert!(after.min_eigenvalue() > -1e-12);
    }

    #[test]
    fn tomograms_are_hermitian(psi in random_state(QubitRegister::memory(1, 2))) {
        let t = DensityMatrix::from_state(&psi).tomogram();
        let (re, im) = t.symmetry_errors();
        prop_assert!(re < 1e-14 && im < 1e-14);
    }
}

#[test]
fn qubit_cap_is_enforced() {
    let err = StateVector::all_up(QubitRegister::memory(1, 24)).unwrap_err();
    assert!(err.to_string().contains("cap"), "{err}");
    assert!(RestrictedState::vacuum(QubitRegister::memory(1, 200)).dim() == 202);
}
