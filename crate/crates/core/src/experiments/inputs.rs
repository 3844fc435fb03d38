// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::config::InputSpec;
use crate::engine::{qubit, Qubit, QubitRegister, StateVector};
use crate::error::Result;

/// Stream for repeat / grid point `index` of a run seeded with `seed`. Every
/// point owns its stream, so results do not depend on scheduling.
pub fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Haar-random pure qubit from two standard complex Gaussians.
pub fn random_pure_qubit<R: Rng + ?Sized>(rng: &mut R) -> Qubit {
    let mut draw = || Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    let (a, b) = (draw(), draw());
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    Qubit::new(a / norm, b / norm)
}

/// A concrete draw of the configured inputs.
#[derive(Debug, Clone)]
pub struct PreparedInputs {
    /// Joint input over `Flying(1..=n)`.
    pub state: StateVector,
    /// Per-slot single-qubit state, `None` for halves of an entangled pair.
    pub single: Vec<Option<Qubit>>,
    pub labels: Vec<String>,
}

/// One input slot as written to the output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputRecord {
    pub label: String,
    /// `[Re α, Im α, Re β, Im β]` for product slots.
    pub amplitudes: Option<[f64; 4]>,
}

impl PreparedInputs {
    pub fn record(&self) -> Vec<InputRecord> {
        self.single
            .iter()
            .zip(&self.labels)
            .map(|(q, label)| InputRecord {
                label: label.clone(),
                amplitudes: q.map(|q| [q[0].re, q[0].im, q[1].re, q[1].im]),
            })
            .collect()
    }
}

fn bell(sign_phi: bool) -> Vec<Complex64> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    // basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩
    if sign_phi {
        vec![h, z, z, -h]
    } else {
        vec![z, h, -h, z]
    }
}

/// Builds the joint input state, drawing random qubits from `rng` in order.
pub fn prepare_inputs<R: Rng + ?Sized>(specs: &[InputSpec], rng: &mut R) -> Result<PreparedInputs> {
    let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
    let mut single = Vec::new();
    let mut labels = Vec::new();
    let push_block = |amps: &mut Vec<Complex64>, block: &[Complex64]| {
        *amps = amps.iter().flat_map(|a| block.iter().map(move |b| a * b)).collect();
    };
    for spec in specs {
        match spec {
            InputSpec::BellPhiMinus | InputSpec::BellPsiMinus => {
                push_block(&mut amplitudes, &bell(*spec == InputSpec::BellPhiMinus));
                single.extend([None, None]);
                labels.extend([spec.to_string(), spec.to_string()]);
            }
            _ => {
                let qs: Vec<Qubit> = match spec {
                    InputSpec::Up => vec![qubit::up()],
                    InputSpec::Down => vec![qubit::down()],
                    InputSpec::Plus => vec![qubit::plus()],
                    InputSpec::Minus => vec![qubit::minus()],
                    InputSpec::Random(n) => (0..*n).map(|_| random_pure_qubit(rng)).collect(),
                    _ => unreachable!(),
                };
                for q in qs {
                    push_block(&mut amplitudes, q.as_slice());
                    single.push(Some(q));
                    labels.push(spec.to_string());
                }
            }
        }
    }
    let state = StateVector::from_amplitudes(QubitRegister::flying(single.len()), amplitudes)?;
    Ok(PreparedInputs { state, single, labels })
}
