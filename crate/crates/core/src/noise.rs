// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Pure dephasing of the chain while a qubit sits in storage.
//!
//! Each static spin `k` carries a Lindblad operator `sqrt(Γ_k/2) σz`, so a
//! coherence that involves a down spin on site `k` decays as `e^{−Γ_k τ}`.
//! Everything runs in the one-excitation sector.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::SectorOp;
use crate::engine::{
    pauli_z, product_state, DensityMatrix, Qubit, QubitLabel, QubitRegister, RestrictedState, Subspace, NORM_TOL,
};
use crate::error::{Error, Result};
use crate::protocol::{interaction_unitary, ExchangeModel, MemorySession, ThetaSchedule, TwoSpinGate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DephasingProfile {
    /// Every chain site dephases at the same rate.
    Homogeneous(f64),
    /// Only `site` dephases.
    SingleSite { site: usize, gamma: f64 },
    /// Explicit `Γ_1 … Γ_N`.
    Arbitrary(Vec<f64>),
}

impl DephasingProfile {
    /// Per-site rates `Γ_1 … Γ_N` in s⁻¹.
    pub fn rates(&self, chain_len: usize) -> Result<Vec<f64>> {
        let rates = match self {
            Self::Homogeneous(g) => vec![*g; chain_len],
            Self::SingleSite { site, gamma } => {
                if *site == 0 || *site > chain_len {
                    return Err(Error::invalid(format!("decohering site {site} is outside the chain 1..={chain_len}")));
                }
                let mut r = vec![0.0; chain_len];
                r[site - 1] = *gamma;
                r
            }
            Self::Arbitrary(r) => {
                if r.len() != chain_len {
                    return Err(Error::DimensionMismatch { expected: chain_len, found: r.len() });
                }
                r.clone()
            }
        };
        if let Some(g) = rates.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
            return Err(Error::invalid(format!("dephasing rates must be finite and non-negative, got {g}")));
        }
        Ok(rates)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DephaseMethod {
    /// Closed-form exponential decay of each coherence.
    #[default]
    Exact,
    /// Fixed-step fourth-order Runge–Kutta on the master equation.
    Rk4,
}

/// Rate attached to each restricted basis state: `Γ_k` if its down spin sits
/// on chain site `k`, zero for the vacuum and for flying excitations.
fn basis_rates(register: &QubitRegister, rates: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(register.len() + 1);
    out.push(0.0);
    for &label in register.labels() {
        out.push(match label {
            QubitLabel::Chain(k) => *rates
                .get(k - 1)
                .ok_or(Error::DimensionMismatch { expected: register.chain_len(), found: rates.len() })?,
            QubitLabel::Flying(_) => 0.0,
        });
    }
    Ok(out)
}

/// Lindblad coefficient `c_ij` with `dρ_ij/dt = c_ij ρ_ij`, summed over the
/// sites touched by either basis state:
/// `Σ_k Γ_k/2 (z_k(i) z_k(j) − 1)` with `z = −1` on a down spin.
fn lindblad_coefficients(register: &QubitRegister, rates: &[f64]) -> Result<DMatrix<f64>> {
    let site = |i: usize| -> Option<usize> {
        match i {
            0 => None,
            _ => match register.labels()[i - 1] {
                QubitLabel::Chain(k) => Some(k),
                QubitLabel::Flying(_) => None,
            },
        }
    };
    let d = register.len() + 1;
    if register.chain_len() != rates.len() {
        return Err(Error::DimensionMismatch { expected: register.chain_len(), found: rates.len() });
    }
    Ok(DMatrix::from_fn(d, d, |i, j| {
        let (si, sj) = (site(i), site(j));
        let touched = if si == sj { [si, None] } else { [si, sj] };
        touched
            .into_iter()
            .flatten()
            .map(|k| {
                let zi = if si == Some(k) { -1.0 } else { 1.0 };
                let zj = if sj == Some(k) { -1.0 } else { 1.0 };
                rates[k - 1] / 2.0 * (zi * zj - 1.0)
            })
            .sum()
    }))
}

/// Evolves a one-excitation density matrix under chain dephasing for time
/// `tau` (seconds). `tau = ∞` is accepted by [`DephaseMethod::Exact`].
pub fn dephase(
    rho: &DensityMatrix,
    profile: &DephasingProfile,
    tau: f64,
    method: DephaseMethod,
) -> Result<DensityMatrix> {
    if rho.subspace() != Subspace::RestrictedOneExcitation {
        return Err(Error::invalid("dephasing needs a one-excitation density matrix"));
    }
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::invalid(format!("storage time must be non-negative, got {tau}")));
    }
    let rates = profile.rates(rho.register().chain_len())?;
    let mut out = rho.clone();
    match method {
        DephaseMethod::Exact => {
            let g = basis_rates(rho.register(), &rates)?;
            let m = out.matrix_mut();
            for i in 0..g.len() {
                for j in 0..g.len() {
                    let rate = g[i] + g[j];
                    if i != j && rate > 0.0 {
                        m[(i, j)] *= (-rate * tau).exp();
                    }
                }
            }
        }
        DephaseMethod::Rk4 => {
            if !tau.is_finite() {
                return Err(Error::invalid("RK4 dephasing needs a finite storage time"));
            }
            let gmax = rates.iter().cloned().fold(0.0, f64::max);
            if gmax == 0.0 || tau == 0.0 {
                return Ok(out);
            }
            let h_max = (0.01 / gmax).min(tau / 100.0);
            let steps = (tau / h_max).ceil() as usize;
            let h = tau / steps as f64;
            let c = lindblad_coefficients(rho.register(), &rates)?;
            let rhs = |m: &DMatrix<Complex64>| m.zip_map(&c, |z, cij| z * cij);
            let m = out.matrix_mut();
            for _ in 0..steps {
                let k1 = rhs(m);
                let k2 = rhs(&(&*m + &k1 * Complex64::from(h / 2.0)));
                let k3 = rhs(&(&*m + &k2 * Complex64::from(h / 2.0)));
                let k4 = rhs(&(&*m + &k3 * Complex64::from(h)));
                *m += (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4) * Complex64::from(h / 6.0);
            }
        }
    }
    Ok(out)
}

/// One point of a retrieved-fidelity curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingPoint {
    pub tau_s: f64,
    pub fidelity_raw: f64,
    pub fidelity_phase_corrected: f64,
}

/// Stored qubit plus chain right after the write pass, ready to be dephased
/// and read back. The matrix has dimension `N + 2`.
#[derive(Debug, Clone)]
pub struct StorageEvolution {
    pub rho: DensityMatrix,
    input: Qubit,
    schedule: ThetaSchedule,
    model: ExchangeModel,
    /// Rows of the read-pass unitary for the vacuum and for the probe's
    /// excitation, restricted to the stored columns. The probe's reduced
    /// state only depends on these two.
    vacuum_row: Vec<Complex64>,
    probe_row: Vec<Complex64>,
}

impl StorageEvolution {
    pub fn encode(input: &Qubit, chain_len: usize, schedule: &ThetaSchedule, model: ExchangeModel) -> Result<Self> {
        let norm = input.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        let inputs = product_state(QubitRegister::flying(1), &[*input])?;
        let mut session = MemorySession::<RestrictedState>::new(&inputs, chain_len)?;
        session.write_pass(1, schedule, model)?;
        let rho = session.state().density();
        let (vacuum_row, probe_row) = read_rows(rho.register(), schedule, model)?;
        Ok(Self { rho, input: *input, schedule: schedule.clone(), model, vacuum_row, probe_row })
    }

    pub fn chain_len(&self) -> usize {
        self.rho.register().chain_len()
    }

    /// Reads a (possibly dephased) post-encode matrix back with a fresh probe
    /// and returns the probe's single-qubit state.
    pub fn read_out(&self, stored: &DensityMatrix) -> Result<DensityMatrix> {
        let probe = QubitLabel::Flying(stored.register().max_flying() + 1);
        let mut register = stored.register().clone();
        register.push(probe)?;
        let d = stored.dim();
        let mut m = DMatrix::zeros(d + 1, d + 1);
        m.view_mut((0, 0), (d, d)).copy_from(stored.matrix());
        let mut rho = DensityMatrix::from_parts(register, m, Subspace::RestrictedOneExcitation)?;
        for k in (1..=self.chain_len()).rev() {
            let gate = TwoSpinGate::new(self.schedule.angle(k), self.model)?;
            rho.apply_restricted_gate(&interaction_unitary(&gate), probe, QubitLabel::Chain(k))?;
        }
        rho.partial_trace(&[probe])
    }

    /// Same result as [`StorageEvolution::read_out`] from the two cached
    /// unitary rows, in `O(d²)`.
    fn probe_state(&self, stored: &DensityMatrix) -> Result<DensityMatrix> {
        let m = stored.matrix();
        let sandwich = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
            let mb = m * nalgebra::DVector::from_iterator(b.len(), b.iter().map(|z| z.conj()));
            a.iter().zip(mb.iter()).map(|(x, y)| x * y).sum()
        };
        let dd = sandwich(&self.probe_row, &self.probe_row);
        let ud = sandwich(&self.vacuum_row, &self.probe_row);
        let uu = stored.trace() - dd;
        let probe = QubitLabel::Flying(stored.register().max_flying() + 1);
        let matrix = DMatrix::from_row_slice(2, 2, &[uu, ud, ud.conj(), dd]);
        DensityMatrix::from_parts(QubitRegister::new(vec![probe])?, matrix, Subspace::Full)
    }

    /// Fidelity after storing for `tau` seconds under `profile`.
    pub fn point(&self, profile: &DephasingProfile, tau: f64, method: DephaseMethod) -> Result<DephasingPoint> {
        let stored = dephase(&self.rho, profile, tau, method)?;
        let mut probe = self.probe_state(&stored)?;
        let fidelity_raw = probe.fidelity_amplitudes(self.input.as_slice())?;
        let label = probe.register().labels()[0];
        probe.apply_single_qubit_gate(&pauli_z(), label)?;
        let fidelity_phase_corrected = probe.fidelity_amplitudes(self.input.as_slice())?;
        Ok(DephasingPoint { tau_s: tau, fidelity_raw, fidelity_phase_corrected })
    }

    /// Long-time limit: every affected coherence fully decayed.
    pub fn saturation(&self, profile: &DephasingProfile) -> Result<DephasingPoint> {
        self.point(profile, f64::INFINITY, DephaseMethod::Exact)
    }
}

/// Rows 0 (vacuum) and probe of the read unitary over `register + probe`,
/// built column by column with the sector kernel.
fn read_rows(
    register: &QubitRegister,
    schedule: &ThetaSchedule,
    model: ExchangeModel,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let probe = QubitLabel::Flying(register.max_flying() + 1);
    let mut full = register.clone();
    full.push(probe)?;
    let chain_len = register.chain_len();
    schedule.check_covers(chain_len)?;
    let ops = (1..=chain_len)
        .rev()
        .map(|k| {
            let gate = TwoSpinGate::new(schedule.angle(k), model)?;
            SectorOp::new(&interaction_unitary(&gate), &full, probe, QubitLabel::Chain(k))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = register.len() + 1;
    let p = 1 + full.position(probe)?;
    let (mut vacuum_row, mut probe_row) = (Vec::with_capacity(d), Vec::with_capacity(d));
    let mut col = vec![Complex64::new(0.0, 0.0); d + 1];
    for j in 0..d {
        col.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        col[j] = Complex64::new(1.0, 0.0);
        for op in &ops {
            op.apply(&mut col);
        }
        vacuum_row.push(col[0]);
        probe_row.push(col[p]);
    }
    Ok((vacuum_row, probe_row))
}

/// Retrieved fidelity of `input` against storage time. Points are evaluated
/// in parallel and returned in grid order.
pub fn fidelity_curve(
    input: &Qubit,
    chain_len: usize,
    schedule: &ThetaSchedule,
    model: ExchangeModel,
    profile: &DephasingProfile,
    tau_grid: &[f64],
    method: DephaseMethod,
) -> Result<Vec<DephasingPoint>> {
    if tau_grid.is_empty() {
        return Err(Error::invalid("tau grid is empty"));
    }
    profile.rates(chain_len)?;
    let evolution = StorageEvolution::encode(input, chain_len, schedule, model)?;
    tau_grid.par_iter().map(|&tau| evolution.point(profile, tau, method)).collect()
}
