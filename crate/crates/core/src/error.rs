// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

use crate::engine::QubitLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("qubit {0} is not part of the register")]
    UnknownLabel(QubitLabel),

    #[error("register of {requested} qubits exceeds the cap of {cap}")]
    RegisterCap { requested: usize, cap: usize },

    #[error("gate is not unitary (max deviation from identity {deviation:.3e})")]
    NonUnitary { deviation: f64 },

    #[error("state is not normalized (norm {norm:.15})")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{weight:.3e} of the probability lies outside the one-excitation sector")]
    OutOfSector { weight: f64 },

    #[error("truncation tail bound {bound:.3e} exceeds tolerance {tolerance:.3e}")]
    Truncation { bound: f64, tolerance: f64 },

    #[error("numerical tolerance violated: {0}")]
    Numerical(String),

    #[error("config error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code used by the CLI: 1 validation, 2 numerical tolerance, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Truncation { .. } | Error::Numerical(_) | Error::NotNormalized { .. } => 2,
            Error::Io { .. } => 3,
            _ => 1,
        }
    }
}
