// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the number of qubits a dense state vector may hold.
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Identifier of one spin-1/2 slot in the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QubitLabel {
    /// Mobile carrier, 1-based in injection order.
    Flying(usize),
    /// Static memory site, 1-based from the front of the chain.
    Chain(usize),
}

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QubitLabel::Flying(i) => write!(f, "f{i}"),
            QubitLabel::Chain(k) => write!(f, "s{k}"),
        }
    }
}

/// Ordered list of qubit labels. The first label is the most significant bit
/// of a basis index; bit value 0 is spin-up and 1 is spin-down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitRegister {
    labels: Vec<QubitLabel>,
}

impl QubitRegister {
    /// Builds a register, checking label uniqueness and chain contiguity.
    /// No size cap is applied here; dense representations check it themselves.
    pub fn new(labels: Vec<QubitLabel>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(*l) {
                return Err(Error::invalid(format!("duplicate qubit label {l}")));
            }
            if matches!(l, QubitLabel::Flying(0) | QubitLabel::Chain(0)) {
                return Err(Error::invalid("qubit labels are 1-based"));
            }
        }
        let mut sites: Vec<usize> = labels
            .iter()
            .filter_map(|l| match l {
                QubitLabel::Chain(k) => Some(*k),
                _ => None,
            })
            .collect();
        sites.sort_unstable();
        if sites.iter().enumerate().any(|(i, &k)| k != i + 1) {
            return Err(Error::invalid("chain labels must be contiguous from s1"));
        }
        Ok(Self { labels })
    }

    /// Flying(1..=n_flying) followed by Chain(1..=chain_len).
    pub fn memory(n_flying: usize, chain_len: usize) -> Self {
        let labels = (1..=n_flying).map(QubitLabel::Flying).chain((1..=chain_len).map(QubitLabel::Chain)).collect();
        Self { labels }
    }

    pub fn flying(n: usize) -> Self {
        Self::memory(n, 0)
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, label: QubitLabel) -> Result<usize> {
        self.labels.iter().position(|l| *l == label).ok_or(Error::UnknownLabel(label))
    }

    pub fn contains(&self, label: QubitLabel) -> bool {
        self.labels.contains(&label)
    }

    /// Bit shift of `label` inside a basis index.
    pub fn shift(&self, label: QubitLabel) -> Result<usize> {
        Ok(self.len() - 1 - self.position(label)?)
    }

    pub fn chain_len(&self) -> usize {
        self.labels.iter().filter(|l| matches!(l, QubitLabel::Chain(_))).count()
    }

    pub fn flying_count(&self) -> usize {
        self.len() - self.chain_len()
    }

    /// Largest flying index in use, 0 if none.
    pub fn max_flying(&self) -> usize {
        self.labels
            .iter()
            .filter_map(|l| match l {
                QubitLabel::Flying(i) => Some(*i),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn push(&mut self, label: QubitLabel) -> Result<()> {
        if self.contains(label) {
            return Err(Error::invalid(format!("duplicate qubit label {label}")));
        }
        self.labels.push(label);
        Ok(())
    }

    pub(crate) fn check_cap(&self, cap: usize) -> Result<()> {
        if self.len() > cap {
            return Err(Error::RegisterCap { requested: self.len(), cap });
        }
        Ok(())
    }

    /// Basis label of index `i` as a string of `0`/`1` in register order.
    pub fn bitstring(&self, i: usize) -> String {
        let n = self.len();
        (0..n).map(|p| if (i >> (n - 1 - p)) & 1 == 1 { '1' } else { '0' }).collect()
    }
}
