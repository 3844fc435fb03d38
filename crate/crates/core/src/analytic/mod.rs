// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form down-flip amplitudes and the special functions behind them.
//!
//! Everything here is computed without touching the simulator, so it serves
//! as an independent check of it.

mod downflip;
mod hypergeom;
mod meixner;
mod moments;
mod readout;

pub use downflip::{
    a0, a1, a1_hypergeometric, a2_00, DownflipDistribution1, DownflipDistribution2, TabulatedDistribution,
    DEFAULT_TAIL_TOL,
};
pub use hypergeom::{binomial, hyp2f1_terminating};
pub use meixner::{meixner_normalized, meixner_weight, pochhammer_ratio};
pub use moments::{closed_form_moments, moments, series_moments, DistributionMoments};
pub use readout::{heisenberg_readout, xy_readout, ReadoutAmplitudes};
