// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::Gate4;
use crate::error::{Error, Result};

/// Flying–static coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExchangeModel {
    /// `g(σ+σ- + σ-σ+)`: partial SWAP.
    #[default]
    Xy,
    /// XY plus `(g/2) σz σz`, which puts a phase `e^{iθ}` on every
    /// trigonometric entry.
    Heisenberg,
}

impl fmt::Display for ExchangeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExchangeModel::Xy => "xy",
            ExchangeModel::Heisenberg => "heisenberg",
        })
    }
}

impl FromStr for ExchangeModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xy" => Ok(ExchangeModel::Xy),
            "heisenberg" => Ok(ExchangeModel::Heisenberg),
            other => Err(Error::invalid(format!("unknown exchange model `{other}`"))),
        }
    }
}

/// One flying–static encounter, fully described by the accumulated angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinGate {
    pub theta: f64,
    pub model: ExchangeModel,
    /// Set when `theta` lies outside `(0, π/2]`. Such gates are still valid
    /// unitaries but the memory analysis does not cover them.
    pub out_of_range: bool,
}

impl TwoSpinGate {
    pub fn new(theta: f64, model: ExchangeModel) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::invalid(format!("coupling angle must be finite (got {theta})")));
        }
        let out_of_range = !(theta > 0.0 && theta <= FRAC_PI_2 + 1e-12);
        if out_of_range {
            log::warn!("coupling angle {theta} outside (0, π/2]");
        }
        Ok(Self { theta, model, out_of_range })
    }

    pub fn unitary(&self) -> Gate4 {
        interaction_unitary(self)
    }
}

/// The 4×4 unitary in the basis `|↑f↑s⟩, |↑f↓s⟩, |↓f↑s⟩, |↓f↓s⟩`.
pub fn interaction_unitary(gate: &TwoSpinGate) -> Gate4 {
    let phase = match gate.model {
        ExchangeModel::Xy => Complex64::new(1.0, 0.0),
        ExchangeModel::Heisenberg => Complex64::from_polar(1.0, gate.theta),
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let c = phase * gate.theta.cos();
    let s = phase * Complex64::new(0.0, -gate.theta.sin());
    #[rustfmt::skip]
    let u = Gate4::new(
        one,  zero, zero, zero,
        zero, c,    s,    zero,
        zero, s,    c,    zero,
        zero, zero, zero, one,
    );
    u
}
