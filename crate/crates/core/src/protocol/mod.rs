// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! The memory protocol: flying–static interaction unitaries, write and read
//! passes, sequential encode/decode and chain sizing.

mod gate;
mod schedule;
mod session;
mod sizing;

pub use gate::{interaction_unitary, ExchangeModel, TwoSpinGate};
pub use schedule::ThetaSchedule;
pub use session::{decode_sequence, encode_sequence, MemorySession, PassDirection, PassRecord, Retrieval};
pub use sizing::{min_chain_length, storage_angle, EpsilonConvention};
