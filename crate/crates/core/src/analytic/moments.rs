// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::downflip::DownflipDistribution1;
use crate::error::Result;

/// Mean site and spread of a one-down-spin distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionMoments {
    pub mean: f64,
    pub std: f64,
}

/// Truncated sums `μ = Σ k|a|²`, `σ² = Σ k²|a|² − μ²` with the cutoff chosen
/// so the `k²`-weighted tail stays below `tol`.
pub fn moments(level: usize, theta: f64, tol: f64) -> Result<DistributionMoments> {
    let dist = DownflipDistribution1::new(level, theta)?;
    let cutoff = dist.cutoff(tol, 2)?;
    let (mut m1, mut m2) = (0.0, 0.0);
    for k in 1..=cutoff {
        let p = dist.amplitude(k).norm_sqr();
        m1 += k as f64 * p;
        m2 += (k * k) as f64 * p;
    }
    Ok(DistributionMoments { mean: m1, std: (m2 - m1 * m1).max(0.0).sqrt() })
}

/// Level-0 moments: `μ₀ = csc²θ`, `σ₀ = cos θ csc²θ`.
pub fn closed_form_moments(theta: f64) -> DistributionMoments {
    let s2 = theta.sin().powi(2);
    DistributionMoments { mean: 1.0 / s2, std: theta.cos() / s2 }
}

/// Level-0 moments from the geometric series `Σ k y^{k−1} = 1/(1−y)²` and
/// `Σ k² y^{k−1} = (1+y)/(1−y)³` at `y = cos²θ`.
pub fn series_moments(theta: f64) -> DistributionMoments {
    let s2 = theta.sin().powi(2);
    let y = theta.cos().powi(2);
    let mean = s2 / (1.0 - y).powi(2);
    let second = s2 * (1.0 + y) / (1.0 - y).powi(3);
    DistributionMoments { mean, std: (second - mean * mean).max(0.0).sqrt() }
}
