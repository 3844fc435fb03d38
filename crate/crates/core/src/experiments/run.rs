// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::Rng;
use rayon::prelude::*;

use super::config::{InputSpec, ScenarioConfig, ScenarioKind, ThetaSpec, DEFAULT_CHI_CHAINS};
use super::inputs::{point_rng, prepare_inputs, InputRecord, PreparedInputs};
use super::result::{config_hash, Cell, NamedTomogram, Provenance, ScenarioResult};
use crate::analytic::{a1, closed_form_moments, moments, DEFAULT_TAIL_TOL};
use crate::engine::{qubit, DensityMatrix, QubitLabel, RestrictedState, SpinState, StateVector};
use crate::error::{Error, Result};
use crate::noise::{fidelity_curve, StorageEvolution};
use crate::protocol::{decode_sequence, encode_sequence, EpsilonConvention, ExchangeModel, Retrieval, ThetaSchedule};

/// Outcome of one encode/decode round.
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub raw: Retrieval,
    pub corrected: Retrieval,
}

impl RoundTrip {
    /// `(raw, phase-corrected)` fidelity of the qubit stored in `slot`
    /// (0-based), or `None` if that slot was half of an entangled input.
    pub fn slot_fidelity(&self, inputs: &PreparedInputs, slot: usize) -> Result<Option<(f64, f64)>> {
        let Some(q) = inputs.single[slot] else { return Ok(None) };
        let source = QubitLabel::Flying(slot + 1);
        let j = self
            .raw
            .sources
            .iter()
            .position(|s| *s == Some(source))
            .ok_or_else(|| Error::invalid(format!("{source} was not retrieved")))?;
        Ok(Some((
            self.raw.qubits[j].fidelity_amplitudes(q.as_slice())?,
            self.corrected.qubits[j].fidelity_amplitudes(q.as_slice())?,
        )))
    }

    pub fn joint_fidelity(&self, inputs: &PreparedInputs) -> Result<(f64, f64)> {
        Ok((self.raw.joint_fidelity(&inputs.state)?, self.corrected.joint_fidelity(&inputs.state)?))
    }
}

fn round_trip_with<S: SpinState>(
    inputs: &StateVector,
    chain_len: usize,
    schedules: &[ThetaSchedule],
    model: ExchangeModel,
) -> Result<RoundTrip> {
    let mut session = encode_sequence::<S>(inputs, chain_len, schedules, model)?;
    let decode: Vec<ThetaSchedule> = schedules.iter().rev().cloned().collect();
    let raw = decode_sequence(&mut session, inputs.num_qubits(), &decode, model, false)?;
    let corrected = raw.with_phase_correction()?;
    Ok(RoundTrip { raw, corrected })
}

/// Stores every input qubit in order and reads them all back. `schedules`
/// holds one schedule per stored qubit (or one shared); each read pass
/// reuses the schedule of the qubit it targets. Inputs inside the
/// one-excitation sector run in the restricted representation.
pub fn round_trip(
    inputs: &StateVector,
    chain_len: usize,
    schedules: &[ThetaSchedule],
    model: ExchangeModel,
) -> Result<RoundTrip> {
    let schedules: Vec<ThetaSchedule> = match schedules.len() {
        1 => vec![schedules[0].clone(); inputs.num_qubits()],
        _ => schedules.to_vec(),
    };
    match round_trip_with::<RestrictedState>(inputs, chain_len, &schedules, model) {
        Err(Error::OutOfSector { .. }) => round_trip_with::<StateVector>(inputs, chain_len, &schedules, model),
        other => other,
    }
}

/// Per-qubit schedules for one repeat, drawing band angles from `rng`.
pub fn draw_schedules<R: Rng + ?Sized>(
    spec: &ThetaSpec,
    chain_len: usize,
    qubits: usize,
    rng: &mut R,
) -> Result<Vec<ThetaSchedule>> {
    match spec {
        ThetaSpec::Fixed { .. } | ThetaSpec::Storage { .. } => {
            Ok(vec![ThetaSchedule::uniform(spec.nominal()?)?; qubits])
        }
        ThetaSpec::PerSiteBand { center, width } => {
            let s = ThetaSchedule::random_band(*center, *width, chain_len, rng.gen())?;
            Ok(vec![s; qubits])
        }
        ThetaSpec::PerRoundBand { center, width } => {
            let (lo, hi) = (center * (1.0 - width), center * (1.0 + width));
            (0..qubits).map(|_| ThetaSchedule::uniform(if hi > lo { rng.gen_range(lo..hi) } else { *center })).collect()
        }
    }
}

fn is_random(cfg: &ScenarioConfig) -> bool {
    cfg.inputs.iter().any(|i| matches!(i, InputSpec::Random(_)))
        || matches!(cfg.theta, Some(ThetaSpec::PerSiteBand { .. } | ThetaSpec::PerRoundBand { .. }))
}

/// Table plus everything else a runner produces.
struct Output {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    summary: BTreeMap<String, f64>,
    tomograms: Vec<NamedTomogram>,
    inputs: Vec<Vec<InputRecord>>,
}

impl Output {
    fn table(columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Self {
        Self { columns, rows, summary: BTreeMap::new(), tomograms: Vec::new(), inputs: Vec::new() }
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult> {
    config.validate()?;
    let out = match config.kind {
        ScenarioKind::EncodeDecode | ScenarioKind::ThetaVariation => run_round_trips(config)?,
        ScenarioKind::DephasingCurve => run_dephasing(config)?,
        ScenarioKind::Distribution => run_distribution(config)?,
        ScenarioKind::ChiSweep => run_chi_sweep(config)?,
        ScenarioKind::Moments => run_moments(config)?,
    };
    let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Ok(ScenarioResult {
        config: config.clone(),
        columns: out.columns.into_iter().map(String::from).collect(),
        rows: out.rows,
        summary: out.summary,
        tomograms: out.tomograms,
        inputs: out.inputs,
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix,
            seed: config.seed,
            config_hash: config_hash(config)?,
        },
    })
}

struct RepeatOutcome {
    inputs: PreparedInputs,
    trip: RoundTrip,
}

fn run_round_trips(cfg: &ScenarioConfig) -> Result<Output> {
    let n = cfg.chain_len()?;
    let spec = cfg.theta_spec()?;
    let qubits = cfg.input_qubits();
    let repeats = if is_random(cfg) { cfg.repeats } else { 1 };
    let outcomes: Vec<RepeatOutcome> = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let mut rng = point_rng(cfg.seed, r as u64);
            let inputs = prepare_inputs(&cfg.inputs, &mut rng)?;
            let schedules = draw_schedules(spec, n, qubits, &mut rng)?;
            let trip = round_trip(&inputs.state, n, &schedules, cfg.model)?;
            Ok(RepeatOutcome { inputs, trip })
        })
        .collect::<Result<_>>()?;

    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let mut rows = Vec::new();
    for slot in 0..qubits {
        let mut raw = Vec::with_capacity(repeats);
        let mut corrected = Vec::with_capacity(repeats);
        for o in &outcomes {
            if let Some((a, b)) = o.trip.slot_fidelity(&o.inputs, slot)? {
                raw.push(a);
                corrected.push(b);
            }
        }
        if raw.is_empty() {
            continue;
        }
        let (fr, fc) = (mean(&raw), mean(&corrected));
        let infidelity = mean(&corrected.iter().map(|f| 1.0 - f).collect::<Vec<_>>());
        rows.push(vec![
            Cell::from(format!("f{}", slot + 1)),
            Cell::from(qubits - slot),
            Cell::from(fr),
            Cell::from(fc),
            Cell::from(infidelity),
        ]);
    }
    let mut summary = BTreeMap::new();
    summary.insert("repeats".to_string(), repeats as f64);
    if cfg.kind == ScenarioKind::EncodeDecode && (qubits > 1 || rows.is_empty()) {
        let joint: Vec<(f64, f64)> =
            outcomes.iter().map(|o| o.trip.joint_fidelity(&o.inputs)).collect::<Result<_>>()?;
        let raw: Vec<f64> = joint.iter().map(|j| j.0).collect();
        let corrected: Vec<f64> = joint.iter().map(|j| j.1).collect();
        let infidelity = 1.0 - mean(&corrected);
        summary.insert("joint_infidelity".to_string(), infidelity);
        rows.push(vec![
            Cell::from("joint"),
            Cell::from(0usize),
            Cell::from(mean(&raw)),
            Cell::from(mean(&corrected)),
            Cell::from(infidelity),
        ]);
    }

    let mut tomograms = Vec::new();
    if cfg.kind == ScenarioKind::EncodeDecode {
        let first = &outcomes[0];
        tomograms.push(NamedTomogram {
            name: "input".into(),
            tomogram: DensityMatrix::from_state(&first.inputs.state).tomogram(),
        });
        for (name, r) in [("retrieved_raw", &first.trip.raw), ("retrieved_phase_corrected", &first.trip.corrected)] {
            if let Some(joint) = &r.joint {
                tomograms.push(NamedTomogram { name: name.into(), tomogram: joint.tomogram() });
            }
        }
    }
    Ok(Output {
        columns: vec!["target", "retrieval_order", "fidelity_raw", "fidelity_phase_corrected", "infidelity"],
        rows,
        summary,
        tomograms,
        inputs: outcomes.iter().map(|o| o.inputs.record()).collect(),
    })
}

fn single_input(cfg: &ScenarioConfig) -> Result<PreparedInputs> {
    let specs = if cfg.inputs.is_empty() { vec![InputSpec::Plus] } else { cfg.inputs.clone() };
    prepare_inputs(&specs, &mut point_rng(cfg.seed, 0))
}

/// `0, 0.1 µs, …, 5 µs`.
pub fn default_tau_grid() -> Vec<f64> {
    (0..=50).map(|i| i as f64 * 1e-7).collect()
}

fn run_dephasing(cfg: &ScenarioConfig) -> Result<Output> {
    let n = cfg.chain_len()?;
    let inputs = single_input(cfg)?;
    let input = inputs.single[0].ok_or_else(|| Error::invalid("dephasing needs a single-qubit input"))?;
    // band angles come from stream 1 so they never overlap the input draw
    let schedule = draw_schedules(cfg.theta_spec()?, n, 1, &mut point_rng(cfg.seed, 1))?.remove(0);
    let profile = cfg.profile();
    let taus = cfg.tau_grid.clone().unwrap_or_else(default_tau_grid);
    let curve = fidelity_curve(&input, n, &schedule, cfg.model, &profile, &taus, cfg.method)?;
    let saturation = StorageEvolution::encode(&input, n, &schedule, cfg.model)?.saturation(&profile)?;
    let rows = curve
        .iter()
        .map(|p| vec![Cell::from(p.tau_s), Cell::from(p.fidelity_raw), Cell::from(p.fidelity_phase_corrected)])
        .collect();
    let mut out = Output::table(vec!["tau_s", "fidelity_raw", "fidelity_phase_corrected"], rows);
    out.summary.insert("theta".into(), schedule.angle(1));
    out.summary.insert("saturated_fidelity_raw".into(), saturation.fidelity_raw);
    out.summary.insert("saturated_fidelity_phase_corrected".into(), saturation.fidelity_phase_corrected);
    out.inputs.push(inputs.record());
    Ok(out)
}

/// Per-site down-spin amplitudes after storing `|↓⟩` and then `level` fresh
/// `|↑⟩` qubits, simulated in the one-excitation sector.
pub fn simulate_downflip(
    chain_len: usize,
    level: usize,
    theta: f64,
    model: ExchangeModel,
) -> Result<Vec<num_complex::Complex64>> {
    let qubits: Vec<_> = std::iter::once(qubit::down()).chain(std::iter::repeat_n(qubit::up(), level)).collect();
    let inputs = crate::engine::product_state(crate::engine::QubitRegister::flying(level + 1), &qubits)?;
    let session = encode_sequence::<RestrictedState>(&inputs, chain_len, &[ThetaSchedule::uniform(theta)?], model)?;
    (1..=chain_len).map(|k| session.state().excitation_amplitude(QubitLabel::Chain(k))).collect()
}

fn run_distribution(cfg: &ScenarioConfig) -> Result<Output> {
    let n = cfg.chain_len()?;
    let theta = cfg.theta_spec()?.nominal()?;
    let levels = cfg.l_grid.clone().unwrap_or_else(|| vec![0, 1, 2]);
    let tables: Vec<Vec<Vec<Cell>>> = levels
        .par_iter()
        .map(|&l| {
            let sim = simulate_downflip(n, l, theta, cfg.model)?;
            Ok(sim
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let a = a1(i + 1, l, theta);
                    vec![
                        Cell::from(l),
                        Cell::from(i + 1),
                        Cell::from(a.norm_sqr()),
                        Cell::from(s.norm_sqr()),
                        Cell::from(a.re),
                        Cell::from(a.im),
                        Cell::from(s.re),
                        Cell::from(s.im),
                    ]
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Cell>> = tables.into_iter().flatten().collect();
    let max_err =
        rows.iter().map(|r| (r[2].as_f64().unwrap_or(0.0) - r[3].as_f64().unwrap_or(0.0)).abs()).fold(0.0, f64::max);
    let mut out = Output::table(
        vec![
            "l",
            "k",
            "p_analytic",
            "p_simulated",
            "a_analytic_re",
            "a_analytic_im",
            "a_simulated_re",
            "a_simulated_im",
        ],
        rows,
    );
    out.summary.insert("max_abs_error".into(), max_err);
    Ok(out)
}

/// Least-squares line `y = a + b x` and its R².
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (intercept, slope, r2)
}

fn run_moments(cfg: &ScenarioConfig) -> Result<Output> {
    let theta = cfg.theta_spec()?.nominal()?;
    let levels = cfg.l_grid.clone().unwrap_or_else(|| (0..=10).collect());
    let m: Vec<_> = levels.par_iter().map(|&l| moments(l, theta, DEFAULT_TAIL_TOL)).collect::<Result<_>>()?;
    let rows =
        levels.iter().zip(&m).map(|(&l, m)| vec![Cell::from(l), Cell::from(m.mean), Cell::from(m.std)]).collect();
    let mut out = Output::table(vec!["l", "mean", "std"], rows);
    let closed = closed_form_moments(theta);
    out.summary.insert("mean_closed_form_l0".into(), closed.mean);
    out.summary.insert("std_closed_form_l0".into(), closed.std);
    if levels.len() >= 2 {
        let x: Vec<f64> = levels.iter().map(|&l| l as f64).collect();
        for (name, y) in
            [("mean", m.iter().map(|m| m.mean).collect::<Vec<_>>()), ("std", m.iter().map(|m| m.std).collect())]
        {
            let (a, b, r2) = linear_fit(&x, &y);
            out.summary.insert(format!("{name}_intercept"), a);
            out.summary.insert(format!("{name}_slope"), b);
            out.summary.insert(format!("{name}_r2"), r2);
        }
    }
    Ok(out)
}

/// `−0.1, −0.09, …, 0.1`.
pub fn default_chi_grid() -> Vec<f64> {
    (-10..=10).map(|i| i as f64 / 100.0).collect()
}

/// Encode angle for a χ-sweep chain: the fixed angle if given, otherwise the
/// angle at which the whole chain just holds the qubit.
fn chi_encode_angle(cfg: &ScenarioConfig, n: usize) -> Result<f64> {
    if let Some(spec) = &cfg.theta {
        return spec.nominal();
    }
    let eps = cfg.epsilon.unwrap_or(1e-2);
    let power = match cfg.convention.unwrap_or(EpsilonConvention::AmplitudeCosN) {
        EpsilonConvention::AmplitudeCosN => 1.0,
        EpsilonConvention::ProbabilityCos2N => 2.0,
    };
    Ok(eps.powf(1.0 / (power * n as f64)).acos())
}

fn run_chi_sweep(cfg: &ScenarioConfig) -> Result<Output> {
    let chains = cfg.n_grid.clone().unwrap_or_else(|| DEFAULT_CHI_CHAINS.to_vec());
    let chis = cfg.chi_grid.clone().unwrap_or_else(default_chi_grid);
    let inputs = single_input(cfg)?;
    let input = inputs.single[0].ok_or_else(|| Error::invalid("χ-sweep needs a single-qubit input"))?;
    let points: Vec<(usize, f64)> = chains.iter().flat_map(|&n| chis.iter().map(move |&c| (n, c))).collect();
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|&(n, chi)| {
            let enc = chi_encode_angle(cfg, n)?;
            let (raw, corrected) = mismatched_round_trip(&inputs.state, n, enc, enc * (1.0 + chi), cfg.model)?;
            let f = |r: &Retrieval| r.qubits[0].fidelity_amplitudes(input.as_slice());
            Ok(vec![Cell::from(n), Cell::from(chi), Cell::from(enc), Cell::from(f(&raw)?), Cell::from(f(&corrected)?)])
        })
        .collect::<Result<_>>()?;
    let mut out = Output::table(vec!["n", "chi", "theta_enc", "fidelity_raw", "fidelity_phase_corrected"], rows);
    for &n in &chains {
        let worst = out.rows.iter().filter(|r| r[0] == Cell::from(n)).filter_map(|r| r[4].as_f64()).fold(1.0, f64::min);
        out.summary.insert(format!("min_fidelity_phase_corrected_n{n}"), worst);
    }
    out.inputs.push(inputs.record());
    Ok(out)
}

/// Single-qubit round trip with separate write and read angles.
pub fn mismatched_round_trip(
    inputs: &StateVector,
    chain_len: usize,
    theta_enc: f64,
    theta_dec: f64,
    model: ExchangeModel,
) -> Result<(Retrieval, Retrieval)> {
    let mut session =
        encode_sequence::<RestrictedState>(inputs, chain_len, &[ThetaSchedule::uniform(theta_enc)?], model)?;
    let raw = decode_sequence(&mut session, 1, &[ThetaSchedule::uniform(theta_dec)?], model, false)?;
    let corrected = raw.with_phase_correction()?;
    Ok((raw, corrected))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(kind: ScenarioKind) -> ScenarioConfig {
        let mut c = ScenarioConfig::new(kind);
        c.n = Some(8);
        c.theta = Some(ThetaSpec::Fixed { value: 1.1 });
        c
    }

    #[test]
    fn bell_round_trip_has_tomograms() {
        let mut c = config(ScenarioKind::EncodeDecode);
        c.inputs = vec![InputSpec::BellPhiMinus];
        let r = run_scenario(&c).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.tomograms.len(), 3);
        assert_eq!(r.tomograms[0].tomogram.dim, 4);
        let inf = r.summary["joint_infidelity"];
        assert!(inf > 2.5e-4 && inf < 3.5e-4, "{inf}");
    }

    #[test]
    fn random_runs_are_reproducible() {
        let mut c = config(ScenarioKind::ThetaVariation);
        c.n = Some(5);
        c.inputs = vec![InputSpec::Random(2)];
        c.theta = Some(ThetaSpec::PerRoundBand { center: 1.0, width: 0.1 });
        c.repeats = 3;
        let a = run_scenario(&c).unwrap();
        let b = run_scenario(&c).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.rows.len(), 2);
        assert_eq!(a.inputs.len(), 3);
        c.seed = 1;
        assert_ne!(run_scenario(&c).unwrap().rows, a.rows);
    }

    #[test]
    fn distribution_matches_closed_form() {
        let mut c = config(ScenarioKind::Distribution);
        c.n = Some(9);
        c.theta = Some(ThetaSpec::Fixed { value: 1.2 });
        c.l_grid = Some(vec![2]);
        let r = run_scenario(&c).unwrap();
        assert_eq!(r.rows.len(), 9);
        assert!(r.summary["max_abs_error"] < 1e-10);
    }

    #[test]
    fn moments_are_linear() {
        let mut c = config(ScenarioKind::Moments);
        c.theta = Some(ThetaSpec::Fixed { value: 0.4 });
        let r = run_scenario(&c).unwrap();
        assert_eq!(r.rows.len(), 11);
        assert!(r.summary["mean_r2"] > 0.9999);
    }

    #[test]
    fn chi_sweep_rows_follow_the_grid() {
        let mut c = ScenarioConfig::new(ScenarioKind::ChiSweep);
        c.n_grid = Some(vec![10, 20]);
        c.chi_grid = Some(vec![-0.1, 0.0, 0.1]);
        let r = run_scenario(&c).unwrap();
        let n: Vec<f64> = r.column_f64("n").unwrap();
        assert_eq!(n, vec![10.0, 10.0, 10.0, 20.0, 20.0, 20.0]);
        assert!(r.column_f64("fidelity_phase_corrected").unwrap().iter().all(|&f| f > 0.99));
    }

    #[test]
    fn dephasing_columns() {
        let mut c = config(ScenarioKind::DephasingCurve);
        c.tau_grid = Some(vec![0.0, 1e-6]);
        c.decohering_site = Some(1);
        let r = run_scenario(&c).unwrap();
        assert_eq!(r.columns, ["tau_s", "fidelity_raw", "fidelity_phase_corrected"]);
        assert_eq!(r.rows.len(), 2);
    }

    #[test]
    fn fit_recovers_a_line() {
        let (a, b, r2) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }
}
