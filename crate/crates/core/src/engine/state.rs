// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense state vectors over a labeled qubit register.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::{DensityMatrix, Subspace};
use super::register::{QubitLabel, QubitRegister, DEFAULT_QUBIT_CAP};
use super::{check_unitary, Gate2, Gate4, Qubit, SpinState, NORM_TOL};
use crate::error::{Error, Result};

/// Pure state with `2^n` amplitudes, first register label most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    register: QubitRegister,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-up state `|↑…↑⟩`.
    pub fn all_up(register: QubitRegister) -> Result<Self> {
        register.check_cap(DEFAULT_QUBIT_CAP)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << register.len()];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { register, amplitudes })
    }

    /// Wraps raw amplitudes; the vector must be normalized.
    pub fn from_amplitudes(register: QubitRegister, amplitudes: Vec<Complex64>) -> Result<Self> {
        register.check_cap(DEFAULT_QUBIT_CAP)?;
        let expected = 1usize << register.len();
        if amplitudes.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: amplitudes.len() });
        }
        let s = Self { register, amplitudes };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(s)
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.register.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// `⟨self|other⟩`; registers must have the same dimension.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// Applies `gate` to the ordered pair (`qa`, `qb`): `qa` is the most
    /// significant qubit of the 4×4 basis. Strided in-place update; the
    /// full `2^n × 2^n` operator is never built.
    pub fn apply_two_qubit_gate(&mut self, gate: &Gate4, qa: QubitLabel, qb: QubitLabel) -> Result<()> {
        if qa == qb {
            return Err(Error::invalid(format!("gate qubits must differ (got {qa} twice)")));
        }
        check_unitary(gate)?;
        let ma = 1usize << self.register.shift(qa)?;
        let mb = 1usize << self.register.shift(qb)?;
        let g = gate;
        for i in 0..self.amplitudes.len() {
            if i & (ma | mb) != 0 {
                continue;
            }
            let idx = [i, i | mb, i | ma, i | ma | mb];
            let v = idx.map(|j| self.amplitudes[j]);
            for (r, &j) in idx.iter().enumerate() {
                self.amplitudes[j] = g[(r, 0)] * v[0] + g[(r, 1)] * v[1] + g[(r, 2)] * v[2] + g[(r, 3)] * v[3];
            }
        }
        debug_assert!((self.norm() - 1.0).abs() < NORM_TOL);
        Ok(())
    }

    pub fn apply_single_qubit_gate(&mut self, gate: &Gate2, q: QubitLabel) -> Result<()> {
        check_unitary(gate)?;
        let m = 1usize << self.register.shift(q)?;
        for i in 0..self.amplitudes.len() {
            if i & m != 0 {
                continue;
            }
            let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | m]);
            self.amplitudes[i] = gate[(0, 0)] * a0 + gate[(0, 1)] * a1;
            self.amplitudes[i | m] = gate[(1, 0)] * a0 + gate[(1, 1)] * a1;
        }
        Ok(())
    }

    /// Appends a fresh `|↑⟩` qubit as the new least significant bit.
    pub fn append_up(&mut self, label: QubitLabel) -> Result<()> {
        let mut reg = self.register.clone();
        reg.push(label)?;
        reg.check_cap(DEFAULT_QUBIT_CAP)?;
        let zero = Complex64::new(0.0, 0.0);
        self.amplitudes = self.amplitudes.iter().flat_map(|&a| [a, zero]).collect();
        self.register = reg;
        Ok(())
    }

    /// Tensor product `self ⊗ other` with `other`'s labels appended.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let mut labels = self.register.labels().to_vec();
        labels.extend_from_slice(other.register.labels());
        let register = QubitRegister::new(labels)?;
        register.check_cap(DEFAULT_QUBIT_CAP)?;
        let amplitudes = self.amplitudes.iter().flat_map(|a| other.amplitudes.iter().map(move |b| a * b)).collect();
        Ok(StateVector { register, amplitudes })
    }

    /// Probability that `q` is spin-down.
    pub fn prob_down(&self, q: QubitLabel) -> Result<f64> {
        let m = 1usize << self.register.shift(q)?;
        Ok(self.amplitudes.iter().enumerate().filter(|(i, _)| i & m != 0).map(|(_, a)| a.norm_sqr()).sum())
    }

    /// Total number of down spins weighted by probability, per excitation count.
    pub fn excitation_distribution(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.num_qubits() + 1];
        for (i, a) in self.amplitudes.iter().enumerate() {
            out[i.count_ones() as usize] += a.norm_sqr();
        }
        out
    }

    /// Reduced density matrix over `keep`, in the order given, computed
    /// straight from the amplitudes.
    pub fn reduced_density(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        let keep_reg = QubitRegister::new(keep.to_vec())?;
        if keep.is_empty() {
            return Err(Error::invalid("partial trace needs at least one kept qubit"));
        }
        let shifts: Vec<usize> = keep.iter().map(|&q| self.register.shift(q)).collect::<Result<_>>()?;
        let kept_mask: usize = shifts.iter().map(|s| 1usize << s).sum();
        let k = keep.len();
        let d = 1usize << k;
        // Group amplitudes by the traced-out bits.
        let kept_index = |i: usize| -> usize {
            shifts.iter().enumerate().fold(0, |acc, (p, &s)| acc | (((i >> s) & 1) << (k - 1 - p)))
        };
        let mut rho = DMatrix::<Complex64>::zeros(d, d);
        let rest_bits: Vec<usize> = (0..self.num_qubits()).filter(|b| kept_mask & (1 << b) == 0).collect();
        let n_rest = 1usize << rest_bits.len();
        let mut column = vec![Complex64::new(0.0, 0.0); d];
        for r in 0..n_rest {
            let base: usize = rest_bits.iter().enumerate().fold(0, |acc, (p, &b)| acc | (((r >> p) & 1) << b));
            for c in column.iter_mut() {
                *c = Complex64::new(0.0, 0.0);
            }
            let mut sub = kept_mask;
            // enumerate subsets of kept_mask
            loop {
                let idx = base | sub;
                column[kept_index(idx)] = self.amplitudes[idx];
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & kept_mask;
            }
            for a in 0..d {
                if column[a] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..d {
                    rho[(a, b)] += column[a] * column[b].conj();
                }
            }
        }
        DensityMatrix::from_parts(keep_reg, rho, Subspace::Full)
    }
}

impl SpinState for StateVector {
    fn register(&self) -> &QubitRegister {
        &self.register
    }

    fn apply_two_qubit_gate(&mut self, gate: &Gate4, qa: QubitLabel, qb: QubitLabel) -> Result<()> {
        StateVector::apply_two_qubit_gate(self, gate, qa, qb)
    }

    fn apply_pauli_z(&mut self, q: QubitLabel) -> Result<()> {
        self.apply_single_qubit_gate(&super::pauli_z(), q)
    }

    fn append_up(&mut self, label: QubitLabel) -> Result<()> {
        StateVector::append_up(self, label)
    }

    fn prob_down(&self, q: QubitLabel) -> Result<f64> {
        StateVector::prob_down(self, q)
    }

    fn reduced_density(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        StateVector::reduced_density(self, keep)
    }

    fn from_flying_inputs(inputs: &StateVector, chain_len: usize) -> Result<Self> {
        let mut s = inputs.clone();
        for k in 1..=chain_len {
            s.append_up(QubitLabel::Chain(k))?;
        }
        Ok(s)
    }
}

/// Tensor product of single-qubit states, in register order.
pub fn product_state(register: QubitRegister, assignment: &[Qubit]) -> Result<StateVector> {
    if register.len() != assignment.len() {
        return Err(Error::DimensionMismatch { expected: register.len(), found: assignment.len() });
    }
    register.check_cap(DEFAULT_QUBIT_CAP)?;
    for q in assignment {
        let norm = q.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
    }
    let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
    for q in assignment {
        amplitudes = amplitudes.iter().flat_map(|a| [a * q[0], a * q[1]]).collect();
    }
    Ok(StateVector { register, amplitudes })
}
