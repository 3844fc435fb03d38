// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense state-vector and density-matrix kernel.
//!
//! Basis convention: bit value 0 is `|↑⟩`, 1 is `|↓⟩`, and the first label of
//! a [`QubitRegister`] is the most significant bit of a basis index.

mod dense;
mod density;
mod register;
mod restricted;
mod state;

use nalgebra::{Matrix2, Matrix4, SMatrix, Vector2};
use num_complex::Complex64;

pub use dense::{dense_interaction_matrix, MAX_DENSE_CHAIN};
pub use density::{DensityMatrix, Subspace, Tomogram, PSD_TOL};
pub use register::{QubitLabel, QubitRegister, DEFAULT_QUBIT_CAP};
pub(crate) use restricted::SectorOp;
pub use restricted::{RestrictedState, DEFAULT_SECTOR_THRESHOLD};
pub use state::{product_state, StateVector};

use crate::error::{Error, Result};

pub type Gate4 = Matrix4<Complex64>;
pub type Gate2 = Matrix2<Complex64>;
/// Single-qubit pure state `(amp_up, amp_down)`.
pub type Qubit = Vector2<Complex64>;

/// Tolerance on norms and unitarity.
pub const NORM_TOL: f64 = 1e-12;

/// Common single-qubit states.
pub mod qubit {
    use super::Qubit;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn up() -> Qubit {
        Qubit::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn down() -> Qubit {
        Qubit::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn plus() -> Qubit {
        Qubit::new(Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(FRAC_1_SQRT_2, 0.0))
    }

    pub fn minus() -> Qubit {
        Qubit::new(Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(-FRAC_1_SQRT_2, 0.0))
    }
}

pub fn pauli_z() -> Gate2 {
    Gate2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0))
}

/// Largest entry of `|U U† − 1|`.
pub fn unitarity_deviation<const D: usize>(u: &SMatrix<Complex64, D, D>) -> f64 {
    let prod = u * u.adjoint() - SMatrix::<Complex64, D, D>::identity();
    prod.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn check_unitary<const D: usize>(u: &SMatrix<Complex64, D, D>) -> Result<()> {
    let deviation = unitarity_deviation(u);
    if deviation > NORM_TOL || !deviation.is_finite() {
        return Err(Error::NonUnitary { deviation });
    }
    Ok(())
}

/// Operations shared by the full and one-excitation state representations,
/// so the memory protocol can drive either.
pub trait SpinState: Clone + Send {
    fn register(&self) -> &QubitRegister;

    fn apply_two_qubit_gate(&mut self, gate: &Gate4, qa: QubitLabel, qb: QubitLabel) -> Result<()>;

    fn apply_pauli_z(&mut self, q: QubitLabel) -> Result<()>;

    /// Appends a fresh spin-up qubit at the end of the register.
    fn append_up(&mut self, label: QubitLabel) -> Result<()>;

    fn prob_down(&self, q: QubitLabel) -> Result<f64>;

    /// Reduced density matrix over `keep` (in that order), always in the full
    /// `2^|keep|` basis.
    fn reduced_density(&self, keep: &[QubitLabel]) -> Result<DensityMatrix>;

    /// Builds `inputs ⊗ |↑…↑⟩_chain` over `inputs`' flying labels followed by
    /// `Chain(1..=chain_len)`.
    fn from_flying_inputs(inputs: &StateVector, chain_len: usize) -> Result<Self>;
}
