// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! States confined to at most one down spin.
//!
//! Basis index 0 is the all-up state and index `1 + p` carries a single down
//! spin at register position `p`, so `n` qubits need `n + 1` amplitudes. Both
//! exchange models conserve the number of down spins, which keeps a single
//! stored qubit inside this sector for any chain length.

use num_complex::Complex64;

use super::density::DensityMatrix;
use super::register::{QubitLabel, QubitRegister, DEFAULT_QUBIT_CAP};
use super::state::StateVector;
use super::{check_unitary, Gate4, SpinState, NORM_TOL};
use crate::error::{Error, Result};

/// Default out-of-sector weight tolerated by [`RestrictedState::project`].
pub const DEFAULT_SECTOR_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedState {
    register: QubitRegister,
    amplitudes: Vec<Complex64>,
}

/// A two-qubit gate as it acts inside the sector: every basis state picks up
/// `g00` except the two that carry the excitation on `qa` or `qb`, which mix.
pub(crate) struct SectorOp {
    g00: Complex64,
    block: [[Complex64; 2]; 2],
    ia: usize,
    ib: usize,
}

impl SectorOp {
    pub(crate) fn new(gate: &Gate4, register: &QubitRegister, qa: QubitLabel, qb: QubitLabel) -> Result<Self> {
        if qa == qb {
            return Err(Error::invalid(format!("gate qubits must differ (got {qa} twice)")));
        }
        check_unitary(gate)?;
        let leak = [(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0), (1, 3), (2, 3), (3, 1), (3, 2)]
            .iter()
            .map(|&(r, c)| gate[(r, c)].norm())
            .fold(0.0, f64::max);
        if leak > NORM_TOL {
            return Err(Error::invalid("gate does not conserve the number of down spins"));
        }
        Ok(Self {
            g00: gate[(0, 0)],
            // 4×4 index 1 is |↑a ↓b⟩, index 2 is |↓a ↑b⟩
            block: [[gate[(1, 1)], gate[(1, 2)]], [gate[(2, 1)], gate[(2, 2)]]],
            ia: 1 + register.position(qa)?,
            ib: 1 + register.position(qb)?,
        })
    }

    pub(crate) fn apply(&self, v: &mut [Complex64]) {
        let (xb, xa) = (v[self.ib], v[self.ia]);
        if self.g00 != Complex64::new(1.0, 0.0) {
            for z in v.iter_mut() {
                *z *= self.g00;
            }
        }
        v[self.ib] = self.block[0][0] * xb + self.block[0][1] * xa;
        v[self.ia] = self.block[1][0] * xb + self.block[1][1] * xa;
    }
}

impl RestrictedState {
    /// All spins up.
    pub fn vacuum(register: QubitRegister) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); register.len() + 1];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { register, amplitudes }
    }

    pub fn from_amplitudes(register: QubitRegister, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != register.len() + 1 {
            return Err(Error::DimensionMismatch { expected: register.len() + 1, found: amplitudes.len() });
        }
        let s = Self { register, amplitudes };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(s)
    }

    /// Projects a full state onto the sector, refusing when more than
    /// `threshold` of its probability lies outside it.
    pub fn project(state: &StateVector, threshold: f64) -> Result<Self> {
        let n = state.num_qubits();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut outside = 0.0;
        for (i, a) in state.amplitudes().iter().enumerate() {
            match i.count_ones() {
                0 => amplitudes[0] = *a,
                1 => amplitudes[n - i.trailing_zeros() as usize] = *a,
                _ => outside += a.norm_sqr(),
            }
        }
        if outside > threshold {
            return Err(Error::OutOfSector { weight: outside });
        }
        Ok(Self { register: state.register().clone(), amplitudes })
    }

    /// Back to the full `2^n` basis.
    pub fn lift(&self) -> Result<StateVector> {
        let n = self.register.len();
        self.register.check_cap(DEFAULT_QUBIT_CAP)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (i, a) in self.amplitudes.iter().enumerate() {
            amps[Self::full_index(n, i)] = *a;
        }
        StateVector::from_amplitudes(self.register.clone(), amps)
    }

    /// Full-basis index of restricted index `i` in an `n`-qubit register.
    pub fn full_index(n: usize, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            1 << (n - i)
        }
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Amplitude of the all-up configuration.
    pub fn vacuum_amplitude(&self) -> Complex64 {
        self.amplitudes[0]
    }

    /// Amplitude of the configuration with a single down spin on `q`.
    pub fn excitation_amplitude(&self, q: QubitLabel) -> Result<Complex64> {
        Ok(self.amplitudes[1 + self.register.position(q)?])
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_restricted(self)
    }

    pub fn apply_two_qubit_gate(&mut self, gate: &Gate4, qa: QubitLabel, qb: QubitLabel) -> Result<()> {
        SectorOp::new(gate, &self.register, qa, qb)?.apply(&mut self.amplitudes);
        debug_assert!((self.norm() - 1.0).abs() < NORM_TOL);
        Ok(())
    }
}

impl SpinState for RestrictedState {
    fn register(&self) -> &QubitRegister {
        &self.register
    }

    fn apply_two_qubit_gate(&mut self, gate: &Gate4, qa: QubitLabel, qb: QubitLabel) -> Result<()> {
        RestrictedState::apply_two_qubit_gate(self, gate, qa, qb)
    }

    fn apply_pauli_z(&mut self, q: QubitLabel) -> Result<()> {
        let i = 1 + self.register.position(q)?;
        self.amplitudes[i] = -self.amplitudes[i];
        Ok(())
    }

    fn append_up(&mut self, label: QubitLabel) -> Result<()> {
        self.register.push(label)?;
        self.amplitudes.push(Complex64::new(0.0, 0.0));
        Ok(())
    }

    fn prob_down(&self, q: QubitLabel) -> Result<f64> {
        Ok(self.excitation_amplitude(q)?.norm_sqr())
    }

    fn reduced_density(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        self.density().partial_trace(keep)
    }

    fn from_flying_inputs(inputs: &StateVector, chain_len: usize) -> Result<Self> {
        let mut s = Self::project(inputs, DEFAULT_SECTOR_THRESHOLD)?;
        for k in 1..=chain_len {
            s.append_up(QubitLabel::Chain(k))?;
        }
        Ok(s)
    }
}
