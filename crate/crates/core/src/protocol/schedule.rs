// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coupling angle seen by one flying qubit at each chain site during a pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaSchedule {
    Uniform(f64),
    PerSite(Vec<f64>),
    /// Independent draws from `center·(1 ± width)`; the seed is kept so the
    /// angles can be regenerated.
    RandomBand {
        center: f64,
        width: f64,
        seed: u64,
        angles: Vec<f64>,
    },
}

impl ThetaSchedule {
    pub fn uniform(theta: f64) -> Result<Self> {
        check_finite(theta)?;
        Ok(ThetaSchedule::Uniform(theta))
    }

    pub fn per_site(angles: Vec<f64>) -> Result<Self> {
        angles.iter().try_for_each(|&t| check_finite(t))?;
        Ok(ThetaSchedule::PerSite(angles))
    }

    /// Site angles drawn uniformly from `(center(1 − width), center(1 + width))`
    /// with ChaCha8 seeded by `seed`.
    pub fn random_band(center: f64, width: f64, sites: usize, seed: u64) -> Result<Self> {
        check_finite(center)?;
        if width.is_nan() || width < 0.0 {
            return Err(Error::invalid(format!("band width must be ≥ 0 (got {width})")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = (center * (1.0 - width), center * (1.0 + width));
        let angles = (0..sites).map(|_| if hi > lo { rng.gen_range(lo..hi) } else { center }).collect();
        Ok(ThetaSchedule::RandomBand { center, width, seed, angles })
    }

    /// Angle at 1-based `site`.
    pub fn angle(&self, site: usize) -> f64 {
        match self {
            ThetaSchedule::Uniform(t) => *t,
            ThetaSchedule::PerSite(v) | ThetaSchedule::RandomBand { angles: v, .. } => v[site - 1],
        }
    }

    /// Every site angle multiplied by `factor`, e.g. `1 + χ` for a
    /// mismatched read.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            ThetaSchedule::Uniform(t) => ThetaSchedule::Uniform(t * factor),
            ThetaSchedule::PerSite(v) | ThetaSchedule::RandomBand { angles: v, .. } => {
                ThetaSchedule::PerSite(v.iter().map(|t| t * factor).collect())
            }
        }
    }

    /// Fails unless the schedule covers exactly `chain_len` sites.
    pub fn check_covers(&self, chain_len: usize) -> Result<()> {
        match self {
            ThetaSchedule::Uniform(_) => Ok(()),
            ThetaSchedule::PerSite(v) | ThetaSchedule::RandomBand { angles: v, .. } => {
                if v.len() == chain_len {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch { expected: chain_len, found: v.len() })
                }
            }
        }
    }
}

fn check_finite(theta: f64) -> Result<()> {
    if theta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("coupling angle must be finite (got {theta})")))
    }
}
