// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form state after one stored qubit is read back.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes left after writing `α|↑⟩ + β|↓⟩` into an infinite chain and
/// reading it back with a matched `|↑⟩` probe.
///
/// The probe ends as `α|↑⟩ + β'|↓⟩` with the chain in `|F⟩`, plus a residue
/// `Σ_k γ_k |↑⟩ ⊗ S_k⁻|F⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutAmplitudes {
    pub theta: f64,
    pub beta: Complex64,
    pub beta_prime: Complex64,
    /// Phase picked up by each trigonometric gate entry (`e^{iθ}` for the
    /// Heisenberg model, 1 for XY).
    phase: Complex64,
    denominator: Complex64,
}

impl ReadoutAmplitudes {
    fn new(beta: Complex64, theta: f64, phase: Complex64) -> Result<Self> {
        let (s, c) = theta.sin_cos();
        let p2 = phase * phase;
        let denominator = Complex64::new(1.0, 0.0) - p2 * c * c;
        if denominator.norm() <= 1e-12 {
            return Err(Error::Numerical(format!("read-out denominator vanishes at theta = {theta}")));
        }
        let beta_prime = -beta * p2 * s * s / denominator;
        Ok(Self { theta, beta, beta_prime, phase, denominator })
    }

    /// Chain residue at site `k ≥ 1`:
    /// `γ_k = −i β sin θ cos^k θ p^{k+1} (1 − p²)/(1 − p² cos²θ)`.
    pub fn gamma(&self, k: usize) -> Complex64 {
        let (s, c) = self.theta.sin_cos();
        let p2 = self.phase * self.phase;
        Complex64::new(0.0, -1.0)
            * self.beta
            * s
            * c.powi(k as i32)
            * self.phase.powu(k as u32 + 1)
            * (Complex64::new(1.0, 0.0) - p2)
            / self.denominator
    }

    /// `Σ_k |γ_k|²` in closed form.
    pub fn residue_weight(&self) -> f64 {
        let (s, c) = self.theta.sin_cos();
        let p2 = self.phase * self.phase;
        let g = self.beta.norm_sqr() * s * s * ((Complex64::new(1.0, 0.0) - p2) / self.denominator).norm_sqr();
        let c2 = c * c;
        if c2 >= 1.0 {
            return 0.0;
        }
        g * c2 / (1.0 - c2)
    }
}

/// Read-out under Heisenberg exchange: every gate entry carries `e^{iθ}`.
pub fn heisenberg_readout(beta: Complex64, theta: f64) -> Result<ReadoutAmplitudes> {
    ReadoutAmplitudes::new(beta, theta, Complex64::from_polar(1.0, theta))
}

/// The same expressions with the extra phase set to 1, i.e. XY exchange.
pub fn xy_readout(beta: Complex64, theta: f64) -> Result<ReadoutAmplitudes> {
    ReadoutAmplitudes::new(beta, theta, Complex64::new(1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    #[test]
    fn exact_at_half_pi() {
        let b = Complex64::new(0.3, -0.4);
        let r = heisenberg_readout(b, FRAC_PI_2).unwrap();
        assert!((r.beta_prime - b).norm() < 1e-15);
        for k in 1..5 {
            assert!(r.gamma(k).norm() < 1e-15);
        }
    }

    #[test]
    fn xy_limit_is_phase_flip() {
        let b = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let r = xy_readout(b, 0.7).unwrap();
        assert!((r.beta_prime + b).norm() < 1e-15);
        assert!(r.gamma(3).norm() < 1e-15);
    }

    #[test]
    fn weights_add_up() {
        let b = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let r = heisenberg_readout(b, 1.0).unwrap();
        let alpha2 = 0.5;
        let direct: f64 = (1..400).map(|k| r.gamma(k).norm_sqr()).sum();
        assert!((direct - r.residue_weight()).abs() < 1e-14);
        let total = alpha2 + r.beta_prime.norm_sqr() + r.residue_weight();
        assert!((total - 1.0).abs() < 1e-14, "{total}");
    }

    #[test]
    fn degenerate_denominator() {
        // the denominator only vanishes at θ = 0
        assert!(heisenberg_readout(Complex64::new(1.0, 0.0), 0.0).is_err());
    }
}
