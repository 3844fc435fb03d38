// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Meixner polynomials normalized for summation over `x = 0, 1, 2, …`.

use super::hypergeom::hyp2f1_terminating;
use crate::error::{Error, Result};

fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && nu < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("nu must lie in (0, 1) (got {nu})")))
    }
}

/// `(μ)_x / x!`, accumulated as a product of ratios so it never overflows.
pub fn pochhammer_ratio(x: u64, mu: u32) -> f64 {
    if mu == 1 {
        return 1.0;
    }
    (0..x).fold(1.0, |acc, i| acc * (mu as f64 + i as f64) / (i as f64 + 1.0))
}

/// `M'_j(x; μ, ν) = ν^{j/2} ₂F₁(−j, −x; μ; 1 − 1/ν)`.
pub fn meixner_normalized(j: u64, x: u64, mu: u32, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if mu == 0 {
        return Err(Error::invalid("mu must be a positive integer"));
    }
    let f = hyp2f1_terminating(-(j as i64), -(x as i64), mu, 1.0 - 1.0 / nu)?;
    Ok(nu.powf(j as f64 / 2.0) * f)
}

/// `ω(x; μ, ν) = (1 − ν)^μ (μ)_x / x! ν^x`.
pub fn meixner_weight(x: u64, mu: u32, nu: f64) -> Result<f64> {
    check_nu(nu)?;
    if mu == 0 {
        return Err(Error::invalid("mu must be a positive integer"));
    }
    let base = (1.0 - nu).powi(mu as i32) * nu.powi(x as i32);
    Ok(if mu == 1 { base } else { base * pochhammer_ratio(x, mu) })
}
