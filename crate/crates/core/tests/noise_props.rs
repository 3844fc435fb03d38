// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use spinmem::engine::{qubit, DensityMatrix, QubitRegister, RestrictedState, Subspace};
use spinmem::noise::{dephase, fidelity_curve, DephaseMethod, DephasingProfile, StorageEvolution};
use spinmem::protocol::{ExchangeModel, ThetaSchedule};

const FLYING: usize = 1;
const CHAIN: usize = 3;

/// Mixture of two random one-excitation pure states.
fn restricted_rho() -> impl Strategy<Value = DMatrix<Complex64>> {
    let d = FLYING + CHAIN + 1;
    (prop::collection::vec(-1.0f64..1.0, 4 * d), 0.0f64..1.0).prop_filter_map("degenerate", move |(v, w)| {
        let vec_of = |off: usize| {
            let a =
                nalgebra::DVector::from_iterator(d, (0..d).map(|i| Complex64::new(v[off + 2 * i], v[off + 2 * i + 1])));
            let n = a.norm();
            (n > 1e-3).then(|| a / Complex64::new(n, 0.0))
        };
        let (a, b) = (vec_of(0)?, vec_of(2 * d)?);
        Some(&a * a.adjoint() * Complex64::new(w, 0.0) + &b * b.adjoint() * Complex64::new(1.0 - w, 0.0))
    })
}

/// Independent oracle: RK4 on `Σ_k Γ_k/2 (Z_k ρ Z_k − ρ)` in the full `2^n` basis.
fn full_space_dephase(rho: &DMatrix<Complex64>, rates: &[f64], tau: f64) -> DMatrix<Complex64> {
    let n = FLYING + CHAIN;
    let dim = 1 << n;
    // diagonal of Z_k in the computational basis
    let zs: Vec<Vec<f64>> = (0..CHAIN)
        .map(|k| {
            let bit = n - 1 - (FLYING + k);
            (0..dim).map(|i| if (i >> bit) & 1 == 0 { 1.0 } else { -1.0 }).collect()
        })
        .collect();
    let rhs = |r: &DMatrix<Complex64>| {
        DMatrix::from_fn(dim, dim, |i, j| {
            zs.iter().zip(rates).map(|(z, g)| (r[(i, j)] * z[i] * z[j] - r[(i, j)]) * (g / 2.0)).sum::<Complex64>()
        })
    };
    let steps = 400;
    let h = tau / steps as f64;
    let mut r = rho.clone();
    for _ in 0..steps {
        let k1 = rhs(&r);
        let k2 = rhs(&(&r + &k1 * Complex64::new(h / 2.0, 0.0)));
        let k3 = rhs(&(&r + &k2 * Complex64::new(h / 2.0, 0.0)));
        let k4 = rhs(&(&r + &k3 * Complex64::new(h, 0.0)));
        r += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0);
    }
    r
}

fn embed(rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = FLYING + CHAIN;
    let mut full = DMatrix::zeros(1 << n, 1 << n);
    for i in 0..=n {
        for j in 0..=n {
            full[(RestrictedState::full_index(n, i), RestrictedState::full_index(n, j))] = rho[(i, j)];
        }
    }
    full
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn restricted_dephasing_matches_full_space_master_equation(
        m in restricted_rho(),
        rates in prop::collection::vec(0.0f64..2.0, CHAIN),
        tau in 0.0f64..2.0,
    ) {
        let rho = DensityMatrix::new(QubitRegister::memory(FLYING, CHAIN), m.clone(), Subspace::RestrictedOneExcitation).unwrap();
        let profile = DephasingProfile::Arbitrary(rates.clone());
        let exact = dephase(&rho, &profile, tau, DephaseMethod::Exact).unwrap();
        let oracle = full_space_dephase(&embed(&m), &rates, tau);
        prop_assert!((embed(exact.matrix()) - oracle).norm() < 1e-10);
    }

    #[test]
    fn rk4_agrees_with_exact_and_keeps_a_valid_state(
        m in restricted_rho(),
        gamma in 1e3f64..1e7,
        tau_scaled in 0.0f64..3.0,
    ) {
        let rho = DensityMatrix::new(QubitRegister::memory(FLYING, CHAIN), m, Subspace::RestrictedOneExcitation).unwrap();
        let profile = DephasingProfile::Homogeneous(gamma);
        let tau = tau_scaled / gamma;
        let exact = dephase(&rho, &profile, tau, DephaseMethod::Exact).unwrap();
        let rk4 = dephase(&rho, &profile, tau, DephaseMethod::Rk4).unwrap();
        prop_assert!((exact.matrix() - rk4.matrix()).norm() < 1e-8);
        prop_assert!((exact.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(exact.min_eigenvalue() > -1e-12);
        for i in 0..exact.dim() {
            prop_assert!((exact.matrix()[(i, i)] - rho.matrix()[(i, i)]).norm() < 1e-14);
        }
    }

    #[test]
    fn fast_readout_matches_probe_simulation(theta in 0.2f64..1.5, gamma in 1e5f64..1e7, tau in 0.0f64..2e-6) {
        let schedule = ThetaSchedule::uniform(theta).unwrap();
        let evo = StorageEvolution::encode(&qubit::plus(), 8, &schedule, ExchangeModel::Xy).unwrap();
        let profile = DephasingProfile::Homogeneous(gamma);
        let point = evo.point(&profile, tau, DephaseMethod::Exact).unwrap();
        let stored = dephase(&evo.rho, &profile, tau, DephaseMethod::Exact).unwrap();
        let raw = evo.read_out(&stored).unwrap().fidelity_amplitudes(qubit::plus().as_slice()).unwrap();
        prop_assert!((point.fidelity_raw - raw).abs() < 1e-12);
    }
}

#[test]
fn infinite_time_only_for_the_exact_method() {
    let schedule = ThetaSchedule::uniform(1.0).unwrap();
    let evo = StorageEvolution::encode(&qubit::plus(), 6, &schedule, ExchangeModel::Xy).unwrap();
    let profile = DephasingProfile::SingleSite { site: 2, gamma: 1e6 };
    assert!(dephase(&evo.rho, &profile, f64::INFINITY, DephaseMethod::Exact).is_ok());
    assert!(dephase(&evo.rho, &profile, f64::INFINITY, DephaseMethod::Rk4).is_err());
    assert!(dephase(&evo.rho, &profile, -1.0, DephaseMethod::Exact).is_err());
}

#[test]
fn fidelity_decays_towards_saturation() {
    let schedule = ThetaSchedule::uniform(1.2).unwrap();
    let profile = DephasingProfile::Homogeneous(1e6);
    let taus: Vec<f64> = (0..=20).map(|i| i as f64 * 2.5e-7).collect();
    let curve = fidelity_curve(&qubit::plus(), 10, &schedule, ExchangeModel::Xy, &profile, &taus, DephaseMethod::Exact)
        .unwrap();
    let sat = StorageEvolution::encode(&qubit::plus(), 10, &schedule, ExchangeModel::Xy)
        .unwrap()
        .saturation(&profile)
        .unwrap();
    for w in curve.windows(2) {
        assert!(w[1].fidelity_phase_corrected <= w[0].fidelity_phase_corrected + 1e-12);
    }
    assert!(curve[0].fidelity_phase_corrected > 0.99);
    let last = curve.last().unwrap().fidelity_phase_corrected;
    assert!(last >= sat.fidelity_phase_corrected - 1e-12);
    assert!((last - sat.fidelity_phase_corrected).abs() < 1e-2);
}
