// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// `C(n, r)` in floating point, exact for the small arguments used here.
pub fn binomial(n: u64, r: u64) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `₂F₁(a, b; c; z)` when `a` or `b` is a nonpositive integer, summed exactly
/// as the finite series `Σ (a)_r (b)_r / ((c)_r r!) z^r`.
pub fn hyp2f1_terminating(a: i64, b: i64, c: u32, z: f64) -> Result<f64> {
    if c == 0 {
        return Err(Error::invalid("c must be a positive integer"));
    }
    let order = match (a <= 0, b <= 0) {
        (true, true) => a.max(b).unsigned_abs(),
        (true, false) => a.unsigned_abs(),
        (false, true) => b.unsigned_abs(),
        (false, false) => {
            return Err(Error::invalid(format!(
                "series does not terminate: neither a = {a} nor b = {b} is a nonpositive integer"
            )))
        }
    };
    let mut term = 1.0;
    let mut sum = 1.0;
    for r in 0..order {
        let r = r as f64;
        term *= (a as f64 + r) * (b as f64 + r) / ((c as f64 + r) * (r + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}
