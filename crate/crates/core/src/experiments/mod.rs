// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario configs, the runner behind every study, and CSV/JSON output.
//!
//! Randomness comes from ChaCha8 seeded with the config seed; repeat `r` (or
//! grid point `r`) uses stream `r`, so results do not depend on how rayon
//! schedules the work.

mod config;
mod inputs;
mod result;
mod run;

pub use config::{
    InputSpec, ScenarioConfig, ScenarioKind, ThetaSpec, DEFAULT_CHI_CHAINS, DEFAULT_GAMMA, DEFAULT_REPEATS,
};
pub use inputs::{point_rng, prepare_inputs, random_pure_qubit, InputRecord, PreparedInputs};
pub use result::{config_hash, emit, render, Cell, NamedTomogram, OutputFormat, Provenance, ScenarioResult};
pub use run::{
    default_chi_grid, default_tau_grid, draw_schedules, linear_fit, mismatched_round_trip, round_trip, run_scenario,
    simulate_downflip, RoundTrip,
};
