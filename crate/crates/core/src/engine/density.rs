// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::register::{QubitLabel, QubitRegister};
use super::restricted::RestrictedState;
use super::state::StateVector;
use super::{Gate2, Gate4, NORM_TOL};
use crate::error::{Error, Result};

/// Allowed negativity of the smallest eigenvalue.
pub const PSD_TOL: f64 = 1e-10;

/// Which basis a [`DensityMatrix`] is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subspace {
    /// All `2^n` computational basis states.
    Full,
    /// `n + 1` states: index 0 is all-up, index `1 + p` has a single down
    /// spin at register position `p`.
    RestrictedOneExcitation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    register: QubitRegister,
    matrix: DMatrix<Complex64>,
    subspace: Subspace,
}

/// Real and imaginary parts of a density matrix, for display.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tomogram {
    pub dim: usize,
    pub real_part: Vec<Vec<f64>>,
    pub imag_part: Vec<Vec<f64>>,
    pub basis_labels: Vec<String>,
}

impl DensityMatrix {
    pub(crate) fn from_parts(register: QubitRegister, matrix: DMatrix<Complex64>, subspace: Subspace) -> Result<Self> {
        let expected = match subspace {
            Subspace::Full => 1usize
                .checked_shl(register.len() as u32)
                .ok_or_else(|| Error::invalid("register too large for a full density matrix"))?,
            Subspace::RestrictedOneExcitation => register.len() + 1,
        };
        if matrix.nrows() != expected || matrix.ncols() != expected {
            return Err(Error::DimensionMismatch { expected, found: matrix.nrows() });
        }
        Ok(Self { register, matrix, subspace })
    }

    /// Builds and validates a density matrix from a raw matrix.
    pub fn new(register: QubitRegister, matrix: DMatrix<Complex64>, subspace: Subspace) -> Result<Self> {
        let rho = Self::from_parts(register, matrix, subspace)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Maximally mixed state on `register`.
    pub fn maximally_mixed(register: QubitRegister) -> Result<Self> {
        let d = 1usize << register.len();
        let m = DMatrix::from_diagonal_element(d, d, Complex64::new(1.0 / d as f64, 0.0));
        Self::from_parts(register, m, Subspace::Full)
    }

    pub fn register(&self) -> &QubitRegister {
        &self.register
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.matrix
    }

    pub fn subspace(&self) -> Subspace {
        self.subspace
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Checks Hermiticity and unit trace (1e-12) and positivity (−1e-10).
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > NORM_TOL {
            return Err(Error::Numerical(format!("density matrix not Hermitian ({herm:.3e})")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::Numerical(format!("density matrix trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::Numerical(format!("density matrix has eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// `|ψ⟩⟨ψ|` in the full basis.
    pub fn from_state(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        let m = &v * v.adjoint();
        Self { register: state.register().clone(), matrix: m, subspace: Subspace::Full }
    }

    /// `|ψ⟩⟨ψ|` in the one-excitation basis.
    pub fn from_restricted(state: &RestrictedState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        let m = &v * v.adjoint();
        Self { register: state.register().clone(), matrix: m, subspace: Subspace::RestrictedOneExcitation }
    }

    /// Traces out everything except `keep`; the result is in the full basis
    /// of the kept qubits, ordered as given.
    pub fn partial_trace(&self, keep: &[QubitLabel]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::invalid("partial trace needs at least one kept qubit"));
        }
        let keep_reg = QubitRegister::new(keep.to_vec())?;
        let positions: Vec<usize> = keep.iter().map(|&q| self.register.position(q)).collect::<Result<_>>()?;
        let k = keep.len();
        let d = 1usize << k;
        let mut out = DMatrix::<Complex64>::zeros(d, d);
        match self.subspace {
            Subspace::Full => {
                let n = self.register.len();
                let shifts: Vec<usize> = positions.iter().map(|p| n - 1 - p).collect();
                let kept_mask: usize = shifts.iter().map(|s| 1usize << s).sum();
                let split = |i: usize| -> (usize, usize) {
                    let a = shifts.iter().enumerate().fold(0, |acc, (p, &s)| acc | (((i >> s) & 1) << (k - 1 - p)));
                    (a, i & !kept_mask)
                };
                let dim = self.dim();
                let parts: Vec<(usize, usize)> = (0..dim).map(split).collect();
                for i in 0..dim {
                    for j in 0..dim {
                        if parts[i].1 == parts[j].1 {
                            out[(parts[i].0, parts[j].0)] += self.matrix[(i, j)];
                        }
                    }
                }
            }
            Subspace::RestrictedOneExcitation => {
                // (kept basis index, traced-out configuration key)
                let split = |i: usize| -> (usize, usize) {
                    if i == 0 {
                        return (0, 0);
                    }
                    let p = i - 1;
                    match positions.iter().position(|&q| q == p) {
                        Some(slot) => (1 << (k - 1 - slot), 0),
                        None => (0, i),
                    }
                };
                let dim = self.dim();
                let parts: Vec<(usize, usize)> = (0..dim).map(split).collect();
                for i in 0..dim {
                    for j in 0..dim {
                        if parts[i].1 == parts[j].1 {
                            out[(parts[i].0, parts[j].0)] += self.matrix[(i, j)];
                        }
                    }
                }
            }
        }
        DensityMatrix::from_parts(keep_reg, out, Subspace::Full)
    }

    /// `⟨ψ|ρ|ψ⟩` for a pure target. A one-excitation `ρ` accepts either a
    /// full-basis target over the same register or a restricted one.
    pub fn fidelity_pure(&self, target: &StateVector) -> Result<f64> {
        let norm = target.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        let psi: Vec<Complex64> = match self.subspace {
            Subspace::Full => target.amplitudes().to_vec(),
            Subspace::RestrictedOneExcitation => {
                if target.register().len() != self.register.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.register.len(),
                        found: target.register().len(),
                    });
                }
                RestrictedState::project(target, super::DEFAULT_SECTOR_THRESHOLD)?.amplitudes().to_vec()
            }
        };
        self.fidelity_amplitudes(&psi)
    }

    /// `⟨ψ|ρ|ψ⟩` for raw amplitudes in this matrix's basis.
    pub fn fidelity_amplitudes(&self, psi: &[Complex64]) -> Result<f64> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.len() });
        }
        let v = nalgebra::DVector::from_column_slice(psi);
        let f = (v.adjoint() * &self.matrix * &v)[(0, 0)].re;
        Ok(f.clamp(0.0, 1.0))
    }

    /// Conjugates a full-basis matrix by a single-qubit gate on `q`.
    pub fn apply_single_qubit_gate(&mut self, gate: &Gate2, q: QubitLabel) -> Result<()> {
        if self.subspace != Subspace::Full {
            return Err(Error::invalid("single-qubit conjugation needs the full basis"));
        }
        let m = 1usize << self.register.shift(q)?;
        let d = self.dim();
        // rows
        for c in 0..d {
            for i in (0..d).filter(|i| i & m == 0) {
                let (a0, a1) = (self.matrix[(i, c)], self.matrix[(i | m, c)]);
                self.matrix[(i, c)] = gate[(0, 0)] * a0 + gate[(0, 1)] * a1;
                self.matrix[(i | m, c)] = gate[(1, 0)] * a0 + gate[(1, 1)] * a1;
            }
        }
        // columns
        for r in 0..d {
            for j in (0..d).filter(|j| j & m == 0) {
                let (a0, a1) = (self.matrix[(r, j)], self.matrix[(r, j | m)]);
                self.matrix[(r, j)] = a0 * gate[(0, 0)].conj() + a1 * gate[(0, 1)].conj();
                self.matrix[(r, j | m)] = a0 * gate[(1, 0)].conj() + a1 * gate[(1, 1)].conj();
            }
        }
        Ok(())
    }

    /// Conjugates a one-excitation matrix by an excitation-preserving gate on
    /// (`qa`, `qb`), touching only the affected rows and columns.
    pub fn apply_restricted_gate(&mut self, gate: &Gate4, qa: QubitLabel, qb: QubitLabel) -> Result<()> {
        if self.subspace != Subspace::RestrictedOneExcitation {
            return Err(Error::invalid("restricted gate conjugation needs the one-excitation basis"));
        }
        let op = super::restricted::SectorOp::new(gate, &self.register, qa, qb)?;
        let d = self.dim();
        for c in 0..d {
            let mut col: Vec<Complex64> = (0..d).map(|r| self.matrix[(r, c)]).collect();
            op.apply(&mut col);
            for (r, v) in col.into_iter().enumerate() {
                self.matrix[(r, c)] = v;
            }
        }
        for r in 0..d {
            let mut row: Vec<Complex64> = (0..d).map(|c| self.matrix[(r, c)].conj()).collect();
            op.apply(&mut row);
            for (c, v) in row.into_iter().enumerate() {
                self.matrix[(r, c)] = v.conj();
            }
        }
        Ok(())
    }

    pub fn tomogram(&self) -> Tomogram {
        let d = self.dim();
        let real_part = (0..d).map(|i| (0..d).map(|j| self.matrix[(i, j)].re).collect()).collect();
        let imag_part = (0..d).map(|i| (0..d).map(|j| self.matrix[(i, j)].im).collect()).collect();
        let basis_labels = match self.subspace {
            Subspace::Full => (0..d).map(|i| self.register.bitstring(i)).collect(),
            Subspace::RestrictedOneExcitation => std::iter::once("vac".to_string())
                .chain(self.register.labels().iter().map(|l| format!("{l}↓")))
                .collect(),
        };
        Tomogram { dim: d, real_part, imag_part, basis_labels }
    }
}

impl Tomogram {
    /// Max asymmetry of the real part and max symmetry of the imaginary part.
    pub fn symmetry_errors(&self) -> (f64, f64) {
        let mut re_err: f64 = 0.0;
        let mut im_err: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                re_err = re_err.max((self.real_part[i][j] - self.real_part[j][i]).abs());
                im_err = im_err.max((self.imag_part[i][j] + self.imag_part[j][i]).abs());
            }
        }
        (re_err, im_err)
    }
}
