// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_2;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the storage tolerance ε is compared with the residual after a write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonConvention {
    /// `cos^{2N} θ < ε`: residual probability of the flying qubit staying down.
    #[default]
    #[serde(rename = "prob")]
    ProbabilityCos2N,
    /// `cos^N θ < ε`: residual amplitude.
    #[serde(rename = "amp")]
    AmplitudeCosN,
}

impl FromStr for EpsilonConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prob" | "probability" => Ok(EpsilonConvention::ProbabilityCos2N),
            "amp" | "amplitude" => Ok(EpsilonConvention::AmplitudeCosN),
            other => Err(Error::invalid(format!("unknown epsilon convention `{other}`"))),
        }
    }
}

impl EpsilonConvention {
    fn power(self) -> f64 {
        match self {
            EpsilonConvention::ProbabilityCos2N => 2.0,
            EpsilonConvention::AmplitudeCosN => 1.0,
        }
    }
}

fn is_half_pi(theta: f64) -> bool {
    (theta - FRAC_PI_2).abs() < 1e-12
}

/// Smallest chain length whose write residual is below `epsilon`.
/// `θ = π/2` is a full swap and needs a single site.
pub fn min_chain_length(theta: f64, epsilon: f64, convention: EpsilonConvention) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1) (got {epsilon})")));
    }
    if is_half_pi(theta) {
        return Ok(1);
    }
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::invalid(format!("theta must lie in (0, π/2] (got {theta})")));
    }
    let p = convention.power();
    let bound = epsilon.ln() / (p * theta.cos().ln());
    let mut n = (bound.floor() as usize).max(1);
    let residual = |n: usize| (theta.cos().ln() * p * n as f64).exp();
    while residual(n) >= epsilon {
        n += 1;
    }
    while n > 1 && residual(n - 1) < epsilon {
        n -= 1;
    }
    Ok(n)
}

/// Angle at which `sites` static spins hold the qubit to amplitude residual
/// `epsilon`: `cos^sites θ = ε`.
pub fn storage_angle(sites: usize, epsilon: f64) -> Result<f64> {
    if sites == 0 {
        return Err(Error::invalid("storage needs at least one site"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!("epsilon must lie in (0, 1) (got {epsilon})")));
    }
    Ok(epsilon.powf(1.0 / sites as f64).acos())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizing_examples() {
        let p = EpsilonConvention::ProbabilityCos2N;
        assert_eq!(min_chain_length(1.0, 1e-4, p).unwrap(), 8);
        let n = min_chain_length(0.1, 1e-4, p).unwrap();
        assert!((919..=921).contains(&n));
        assert_eq!(min_chain_length(1.1, 1e-4, p).unwrap(), 6);
        assert_eq!(min_chain_length(FRAC_PI_2, 1e-4, p).unwrap(), 1);
        // amplitude convention is half as demanding
        assert_eq!(min_chain_length(1.0, 1e-2, EpsilonConvention::AmplitudeCosN).unwrap(), 8);
    }

    #[test]
    fn sizing_errors() {
        let p = EpsilonConvention::ProbabilityCos2N;
        assert!(min_chain_length(1.0, 1.0, p).is_err());
        assert!(min_chain_length(1.0, 0.0, p).is_err());
        assert!(min_chain_length(0.0, 1e-4, p).is_err());
        assert!(min_chain_length(2.0, 1e-4, p).is_err());
    }

    #[test]
    fn storage_angle_for_hundred_sites() {
        let t = storage_angle(100, 1e-2).unwrap();
        assert!((t - 0.30).abs() < 0.005);
        assert!((t.cos().powi(100) - 1e-2).abs() < 1e-12);
    }
}
