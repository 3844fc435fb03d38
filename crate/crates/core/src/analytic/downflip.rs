// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Amplitudes of chain configurations with one or two down spins.

use num_complex::Complex64;

use super::hypergeom::{binomial, hyp2f1_terminating};
use crate::error::{Error, Result};

/// Default bound on the probability left beyond a truncation point.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Hard stop for truncation searches.
const MAX_SITES: usize = 5_000_000;

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Amplitude of a down spin at site `k` right after writing one `|↓⟩`:
/// `−i sin θ cos^{k−1} θ`.
pub fn a0(k: usize, theta: f64) -> Complex64 {
    MINUS_I * theta.sin() * theta.cos().powi(k as i32 - 1)
}

/// Site-`k` amplitude after writing `|↓⟩` followed by `l` `|↑⟩` qubits.
///
/// Summed as `−i Σ_r (−1)^r C(k−1,r) C(l,r) sin^{2r+1}θ cos^{k−1+l−2r}θ`,
/// which has no `tan θ` and so stays finite at `θ = π/2`.
pub fn a1(k: usize, l: usize, theta: f64) -> Complex64 {
    assert!(k >= 1, "sites are 1-based");
    let (s, c) = theta.sin_cos();
    let top = l.min(k - 1);
    let mut sum = 0.0;
    for r in 0..=top {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let cos_pow = (k - 1 + l - 2 * r) as i32;
        sum += sign
            * binomial((k - 1) as u64, r as u64)
            * binomial(l as u64, r as u64)
            * s.powi(2 * r as i32 + 1)
            * c.powi(cos_pow);
    }
    MINUS_I * sum
}

/// Same amplitude via `a0(k) ₂F₁(1−k, −l; 1; −tan²θ) cos^l θ`. Singular at
/// `θ = π/2`.
pub fn a1_hypergeometric(k: usize, l: usize, theta: f64) -> Result<Complex64> {
    let f = hyp2f1_terminating(1 - k as i64, -(l as i64), 1, -theta.tan().powi(2))?;
    Ok(a0(k, theta) * f * theta.cos().powi(l as i32))
}

/// Two-down-spin amplitude at sites `k1 < k2` after writing `|↓↓⟩`.
pub fn a2_00(k1: usize, k2: usize, theta: f64) -> Result<Complex64> {
    if k1 == 0 || k1 >= k2 {
        return Err(Error::invalid(format!("need 1 ≤ k1 < k2 (got k1 = {k1}, k2 = {k2})")));
    }
    let (s, c) = theta.sin_cos();
    let d = k2 as f64 - k1 as f64 - 2.0;
    // (−i s)² c^{k1+k2−1} (2 − d tan²) = −s² (2 c^{k1+k2−1} − d s² c^{k1+k2−3})
    let e = (k1 + k2) as i32;
    let v = -(s * s) * (2.0 * c.powi(e - 1) - d * s * s * c.powi(e - 3));
    Ok(Complex64::new(v, 0.0))
}

/// Bound `B(k) ≥ |a1(k, l, θ)|` from the triangle inequality.
fn a1_abs_bound(k: usize, l: usize, theta: f64) -> f64 {
    let (s, c) = (theta.sin().abs(), theta.cos().abs());
    (0..=l.min(k - 1))
        .map(|r| {
            binomial((k - 1) as u64, r as u64)
                * binomial(l as u64, r as u64)
                * s.powi(2 * r as i32 + 1)
                * c.powi((k - 1 + l - 2 * r) as i32)
        })
        .sum()
}

/// `l`-th one-down-spin distribution, amplitudes evaluated on demand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DownflipDistribution1 {
    pub theta: f64,
    pub level: usize,
}

impl DownflipDistribution1 {
    pub fn new(level: usize, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2 + 1e-12) {
            return Err(Error::invalid(format!("theta must lie in (0, π/2] (got {theta})")));
        }
        Ok(Self { theta, level })
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        a1(k, self.level, self.theta)
    }

    /// Upper bound on `Σ_{k>K} k^power |a(k)|²`, or `None` if the geometric
    /// ratio has not dropped below one by `K`.
    ///
    /// For `k > l` each term of the bound grows by at most `c k/(k−l)` per
    /// site, so the tail is dominated by a geometric series.
    pub fn tail_bound(&self, cutoff: usize, power: i32) -> Option<f64> {
        let l = self.level;
        if cutoff <= l {
            return None;
        }
        let c = self.theta.cos().abs();
        let k = cutoff as f64;
        let ratio = c * k / (k - l as f64);
        let q = ratio * ratio * (1.0 + 1.0 / k).powi(power);
        if q >= 1.0 {
            return None;
        }
        let b = a1_abs_bound(cutoff, l, self.theta);
        Some(k.powi(power) * b * b * q / (1.0 - q))
    }

    /// Smallest cutoff `K` whose weighted tail bound is below `tol`.
    pub fn cutoff(&self, tol: f64, power: i32) -> Result<usize> {
        let mut k = self.level + 1;
        let mut last = f64::INFINITY;
        while k <= MAX_SITES {
            if let Some(b) = self.tail_bound(k, power) {
                if b < tol {
                    return Ok(k);
                }
                last = b;
            }
            k += 1;
        }
        Err(Error::Truncation { bound: last, tolerance: tol })
    }

    /// Amplitudes for sites `1..=K` with `K` chosen so the dropped
    /// probability is below `tol`.
    pub fn tabulate(&self, tol: f64) -> Result<TabulatedDistribution> {
        let cutoff = self.cutoff(tol, 0)?;
        let tail = self.tail_bound(cutoff, 0).unwrap_or(tol);
        Ok(TabulatedDistribution {
            theta: self.theta,
            level: self.level,
            amplitudes: (1..=cutoff).map(|k| self.amplitude(k)).collect(),
            tail_bound: tail,
            error_bound: 0.0,
        })
    }

    pub fn total_probability(&self, cutoff: usize) -> f64 {
        (1..=cutoff).map(|k| self.amplitude(k).norm_sqr()).sum()
    }
}

/// Distribution of two down spins after writing `|↓↓⟩` into a fresh chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DownflipDistribution2 {
    pub theta: f64,
}

impl DownflipDistribution2 {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid(format!("theta must lie in (0, π/2) (got {theta})")));
        }
        Ok(Self { theta })
    }

    pub fn amplitude(&self, k1: usize, k2: usize) -> Result<Complex64> {
        a2_00(k1, k2, self.theta)
    }

    /// `Σ_{k1<k2≤K} |a(k1,k2)|²`.
    pub fn total_probability(&self, cutoff: usize) -> f64 {
        let mut total = 0.0;
        for k2 in 2..=cutoff {
            for k1 in 1..k2 {
                total += a2_00(k1, k2, self.theta).map(|a| a.norm_sqr()).unwrap_or(0.0);
            }
        }
        total
    }

    /// Upper bound on the probability with `k2 > K`.
    ///
    /// Uses `|a| ≤ s² c^{k1+k2−3} (2c² + k2 s²)`; summing `k1` leaves a
    /// single series in `k2` whose ratio is below `c² ((k+1)/k)²`.
    pub fn tail_bound(&self, cutoff: usize) -> Option<f64> {
        let (s, c) = self.theta.sin_cos();
        let term = |k: usize| {
            let w = 2.0 * c * c + k as f64 * s * s;
            s * s * w * w * c.powi(2 * k as i32 - 4)
        };
        let k = (cutoff + 1) as f64;
        let q = c * c * ((k + 1.0) / k).powi(2);
        if q >= 1.0 {
            return None;
        }
        Some(term(cutoff + 1) / (1.0 - q))
    }

    pub fn cutoff(&self, tol: f64) -> Result<usize> {
        let mut k = 2;
        let mut last = f64::INFINITY;
        while k <= MAX_SITES {
            if let Some(b) = self.tail_bound(k) {
                if b < tol {
                    return Ok(k);
                }
                last = b;
            }
            k += 1;
        }
        Err(Error::Truncation { bound: last, tolerance: tol })
    }
}

/// One-down-spin distribution stored as numbers for sites `1..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedDistribution {
    pub theta: f64,
    pub level: usize,
    pub amplitudes: Vec<Complex64>,
    /// Bound on the probability of the true distribution beyond `K`.
    pub tail_bound: f64,
    /// ℓ² bound on the accumulated error of the stored amplitudes.
    pub error_bound: f64,
}

impl TabulatedDistribution {
    pub fn cutoff(&self) -> usize {
        self.amplitudes.len()
    }

    /// Site-`k` amplitude (1-based).
    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amplitudes[k - 1]
    }

    /// One read-direction `|↑⟩` pass, lowering the level by one:
    /// `a'(k) = cos θ a(k) − sin²θ Σ_{s≥1} a(k+s) cos^{s−1} θ`.
    ///
    /// The sum is cut at `K`; the dropped part adds at most `√tail` to the
    /// ℓ² error. The map is a contraction, so earlier errors do not grow and
    /// the tail beyond `K` cannot increase. Fails when the resulting error
    /// bound exceeds `tol`.
    pub fn decode_step(&self, tol: f64) -> Result<TabulatedDistribution> {
        if self.level == 0 {
            return Err(Error::invalid("level-0 distribution cannot be decoded further"));
        }
        let (s, c) = self.theta.sin_cos();
        let n = self.cutoff();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        // running[k] = Σ_{m>k} a(m) c^{m−k−1}, built from the back
        let mut running = Complex64::new(0.0, 0.0);
        for idx in (0..n).rev() {
            out[idx] = self.amplitudes[idx] * c - running * (s * s);
            running = self.amplitudes[idx] + running * c;
        }
        let error_bound = self.error_bound + self.tail_bound.sqrt();
        if error_bound > tol {
            return Err(Error::Truncation { bound: error_bound, tolerance: tol });
        }
        Ok(TabulatedDistribution {
            theta: self.theta,
            level: self.level - 1,
            amplitudes: out,
            tail_bound: self.tail_bound,
            error_bound,
        })
    }

    /// Largest `|a_table(k) − a1(k, level, θ)|` over the table.
    pub fn max_deviation_from_closed_form(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| (a - a1(i + 1, self.level, self.theta)).norm())
            .fold(0.0, f64::max)
    }
}
