// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::gate::{interaction_unitary, ExchangeModel, TwoSpinGate};
use super::schedule::ThetaSchedule;
use crate::engine::{pauli_z, DensityMatrix, QubitLabel, SpinState, StateVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PassDirection {
    /// Sites 1 → N.
    Write,
    /// Sites N → 1.
    Read,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassRecord {
    pub direction: PassDirection,
    pub flying: usize,
    pub schedule: ThetaSchedule,
    pub model: ExchangeModel,
}

/// A chain of static spins plus every flying qubit that has met it. The
/// chain is never reset; emitted qubits stay in the register so their
/// residual correlations remain visible.
#[derive(Debug, Clone)]
pub struct MemorySession<S = StateVector> {
    state: S,
    chain_len: usize,
    encoded: usize,
    log: Vec<PassRecord>,
}

impl<S: SpinState> MemorySession<S> {
    /// Flying inputs over `Flying(1..=n)` next to a fresh `|↑…↑⟩` chain.
    pub fn new(inputs: &StateVector, chain_len: usize) -> Result<Self> {
        let reg = inputs.register();
        let expected: Vec<QubitLabel> = (1..=reg.len()).map(QubitLabel::Flying).collect();
        if reg.labels() != expected.as_slice() {
            return Err(Error::invalid("inputs must be labelled Flying(1), Flying(2), … in order"));
        }
        if chain_len == 0 {
            return Err(Error::invalid("chain length must be positive"));
        }
        Ok(Self { state: S::from_flying_inputs(inputs, chain_len)?, chain_len, encoded: 0, log: Vec::new() })
    }

    pub fn state(&self) -> &S {
        &self.state
    }

    pub fn into_state(self) -> S {
        self.state
    }

    pub fn chain_len(&self) -> usize {
        self.chain_len
    }

    pub fn log(&self) -> &[PassRecord] {
        &self.log
    }

    /// Number of write passes performed so far.
    pub fn encoded(&self) -> usize {
        self.encoded
    }

    fn check_flying(&self, flying: usize) -> Result<QubitLabel> {
        let label = QubitLabel::Flying(flying);
        if !self.state.register().contains(label) {
            return Err(Error::UnknownLabel(label));
        }
        Ok(label)
    }

    fn pass(
        &mut self,
        label: QubitLabel,
        sites: impl Iterator<Item = usize>,
        schedule: &ThetaSchedule,
        model: ExchangeModel,
    ) -> Result<()> {
        schedule.check_covers(self.chain_len)?;
        for k in sites {
            let gate = TwoSpinGate::new(schedule.angle(k), model)?;
            self.state.apply_two_qubit_gate(&interaction_unitary(&gate), label, QubitLabel::Chain(k))?;
        }
        Ok(())
    }

    /// Flying qubit `flying` meets sites 1, 2, …, N.
    pub fn write_pass(&mut self, flying: usize, schedule: &ThetaSchedule, model: ExchangeModel) -> Result<()> {
        let label = self.check_flying(flying)?;
        self.pass(label, 1..=self.chain_len, schedule, model)?;
        self.encoded += 1;
        self.log.push(PassRecord { direction: PassDirection::Write, flying, schedule: schedule.clone(), model });
        Ok(())
    }

    /// Flying qubit `flying` meets sites N, N−1, …, 1.
    pub fn read_pass(&mut self, flying: usize, schedule: &ThetaSchedule, model: ExchangeModel) -> Result<()> {
        let label = self.check_flying(flying)?;
        let p = self.state.prob_down(label)?;
        if p > 1e-12 {
            log::warn!("read probe {label} is not polarised up (P(↓) = {p:.3e})");
        }
        self.pass(label, (1..=self.chain_len).rev(), schedule, model)?;
        self.log.push(PassRecord { direction: PassDirection::Read, flying, schedule: schedule.clone(), model });
        Ok(())
    }

    /// Appends a fresh `|↑⟩` flying qubit and returns its index.
    pub fn add_probe(&mut self) -> Result<usize> {
        let index = self.state.register().max_flying() + 1;
        self.state.append_up(QubitLabel::Flying(index))?;
        Ok(index)
    }
}

/// Output of [`decode_sequence`], everything in retrieval order unless noted.
#[derive(Debug, Clone)]
pub struct Retrieval {
    /// Probe qubits, first-retrieved first.
    pub probes: Vec<QubitLabel>,
    /// Encoded qubit each probe recovers; `None` past the number encoded.
    pub sources: Vec<Option<QubitLabel>>,
    /// Single-qubit state of each probe.
    pub qubits: Vec<DensityMatrix>,
    /// Joint state of the probes that have a source, ordered like the
    /// original inputs (`Flying(1)` first).
    pub joint: Option<DensityMatrix>,
    pub phase_corrected: bool,
}

impl Retrieval {
    /// Copy with σz applied to every retrieved qubit (no-op if already done).
    pub fn with_phase_correction(&self) -> Result<Retrieval> {
        if self.phase_corrected {
            return Ok(self.clone());
        }
        let z = pauli_z();
        let mut out = self.clone();
        for (rho, probe) in out.qubits.iter_mut().zip(&self.probes) {
            rho.apply_single_qubit_gate(&z, *probe)?;
        }
        if let Some(joint) = out.joint.as_mut() {
            let labels = joint.register().labels().to_vec();
            for l in labels {
                joint.apply_single_qubit_gate(&z, l)?;
            }
        }
        out.phase_corrected = true;
        Ok(out)
    }

    /// `⟨ψ_i|ρ_i|ψ_i⟩` of each retrieved qubit against the input it recovers.
    /// `inputs[i]` is the single-qubit state that was stored as `Flying(i+1)`.
    pub fn fidelities(&self, inputs: &[crate::engine::Qubit]) -> Result<Vec<f64>> {
        self.qubits
            .iter()
            .zip(&self.sources)
            .map(|(rho, src)| {
                let i = match src {
                    Some(QubitLabel::Flying(i)) => *i,
                    _ => return Err(Error::invalid("retrieved qubit has no stored counterpart")),
                };
                let psi = inputs.get(i - 1).ok_or_else(|| Error::invalid("missing input state"))?;
                rho.fidelity_amplitudes(psi.as_slice())
            })
            .collect()
    }

    /// Fidelity of the joint retrieved state with the original joint input.
    pub fn joint_fidelity(&self, inputs: &StateVector) -> Result<f64> {
        let joint = self.joint.as_ref().ok_or_else(|| Error::invalid("nothing was retrieved"))?;
        if joint.dim() != inputs.dim() {
            return Err(Error::DimensionMismatch { expected: inputs.dim(), found: joint.dim() });
        }
        joint.fidelity_amplitudes(inputs.amplitudes())
    }
}

fn schedule_for(schedules: &[ThetaSchedule], i: usize) -> Result<&ThetaSchedule> {
    match schedules.len() {
        0 => Err(Error::invalid("at least one schedule is required")),
        1 => Ok(&schedules[0]),
        _ => schedules.get(i).ok_or_else(|| Error::invalid(format!("no schedule for pass {}", i + 1))),
    }
}

/// Writes every input qubit in turn: `Flying(1)` first. `schedules` holds one
/// shared schedule or one per input.
pub fn encode_sequence<S: SpinState>(
    inputs: &StateVector,
    chain_len: usize,
    schedules: &[ThetaSchedule],
    model: ExchangeModel,
) -> Result<MemorySession<S>> {
    let mut session = MemorySession::<S>::new(inputs, chain_len)?;
    for i in 0..inputs.num_qubits() {
        session.write_pass(i + 1, schedule_for(schedules, i)?, model)?;
    }
    Ok(session)
}

/// Injects `count` fresh `|↑⟩` probes from the tail, one read pass each.
/// Retrieval runs in reverse encode order, so probe `j` uses
/// `schedules[j]` (or the single shared schedule).
pub fn decode_sequence<S: SpinState>(
    session: &mut MemorySession<S>,
    count: usize,
    schedules: &[ThetaSchedule],
    model: ExchangeModel,
    phase_correct: bool,
) -> Result<Retrieval> {
    if count == 0 {
        return Err(Error::invalid("decode count must be positive"));
    }
    let stored = session.encoded;
    if count > stored {
        log::warn!("decoding {count} qubits from a memory holding {stored}; extra probes have no target");
    }
    let mut probes = Vec::with_capacity(count);
    let mut sources = Vec::with_capacity(count);
    for j in 0..count {
        let probe = session.add_probe()?;
        session.read_pass(probe, schedule_for(schedules, j)?, model)?;
        probes.push(QubitLabel::Flying(probe));
        sources.push((j < stored).then(|| QubitLabel::Flying(stored - j)));
    }
    if phase_correct {
        for &p in &probes {
            session.state.apply_pauli_z(p)?;
        }
    }
    let qubits = probes.iter().map(|&p| session.state.reduced_density(&[p])).collect::<Result<Vec<_>>>()?;
    let mut joint_probes: Vec<(QubitLabel, QubitLabel)> =
        probes.iter().zip(&sources).filter_map(|(p, s)| s.map(|s| (s, *p))).collect();
    joint_probes.sort();
    let keep: Vec<QubitLabel> = joint_probes.into_iter().map(|(_, p)| p).collect();
    let joint = if keep.is_empty() { None } else { Some(session.state.reduced_density(&keep)?) };
    Ok(Retrieval { probes, sources, qubits, joint, phase_corrected: phase_correct })
}
