// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Passive spin-chain quantum memory: a sparse simulator for the write/read
//! protocol plus closed-form expressions for the stored excitation profile.

pub mod analytic;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod noise;
pub mod protocol;

pub use error::{Error, Result};
