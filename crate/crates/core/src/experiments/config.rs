// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{DephaseMethod, DephasingProfile};
use crate::protocol::{storage_angle, EpsilonConvention, ExchangeModel};

pub const DEFAULT_REPEATS: usize = 10;
pub const DEFAULT_CHI_CHAINS: [usize; 4] = [10, 20, 50, 100];
pub const DEFAULT_GAMMA: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    EncodeDecode,
    DephasingCurve,
    Distribution,
    ChiSweep,
    ThetaVariation,
    Moments,
}

/// How coupling angles are assigned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ThetaSpec {
    Fixed {
        value: f64,
    },
    /// Fresh `θ_k ∈ center(1 ± width)` per chain site, redrawn every repeat.
    PerSiteBand {
        center: f64,
        width: f64,
    },
    /// Fresh `θ^i ∈ center(1 ± width)` per stored qubit, redrawn every repeat.
    PerRoundBand {
        center: f64,
        width: f64,
    },
    /// Angle at which `sites` spins hold the qubit to residual `epsilon`
    /// (amplitude convention); a single site means a full swap.
    Storage {
        sites: usize,
        epsilon: f64,
    },
}

impl ThetaSpec {
    /// Nominal angle: the fixed value, the band center or the storage angle.
    pub fn nominal(&self) -> Result<f64> {
        match self {
            ThetaSpec::Fixed { value } => Ok(*value),
            ThetaSpec::PerSiteBand { center, .. } | ThetaSpec::PerRoundBand { center, .. } => Ok(*center),
            ThetaSpec::Storage { sites: 1, .. } => Ok(FRAC_PI_2),
            ThetaSpec::Storage { sites, epsilon } => storage_angle(*sites, *epsilon),
        }
    }
}

/// A named input. Bell states occupy two consecutive flying qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputSpec {
    Up,
    Down,
    Plus,
    Minus,
    BellPhiMinus,
    BellPsiMinus,
    Random(usize),
}

impl InputSpec {
    pub fn qubits(&self) -> usize {
        match self {
            InputSpec::BellPhiMinus | InputSpec::BellPsiMinus => 2,
            InputSpec::Random(n) => *n,
            _ => 1,
        }
    }
}

impl FromStr for InputSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "up" => InputSpec::Up,
            "down" => InputSpec::Down,
            "plus" => InputSpec::Plus,
            "minus" => InputSpec::Minus,
            "bell-phi-minus" => InputSpec::BellPhiMinus,
            "bell-psi-minus" => InputSpec::BellPsiMinus,
            "random" => InputSpec::Random(1),
            other => {
                let n = other
                    .strip_prefix("random(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|n| n.trim().parse::<usize>().ok())
                    .filter(|&n| n > 0)
                    .ok_or_else(|| Error::invalid(format!("unknown input `{other}`")))?;
                InputSpec::Random(n)
            }
        })
    }
}

impl fmt::Display for InputSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputSpec::Up => f.write_str("up"),
            InputSpec::Down => f.write_str("down"),
            InputSpec::Plus => f.write_str("plus"),
            InputSpec::Minus => f.write_str("minus"),
            InputSpec::BellPhiMinus => f.write_str("bell-phi-minus"),
            InputSpec::BellPsiMinus => f.write_str("bell-psi-minus"),
            InputSpec::Random(n) => write!(f, "random({n})"),
        }
    }
}

impl Serialize for InputSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for InputSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn default_repeats() -> usize {
    DEFAULT_REPEATS
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

/// Declarative description of one study. The JSON form maps field-for-field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    /// Chain length; χ-sweeps use `n_grid` instead.
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub theta: Option<ThetaSpec>,
    #[serde(default)]
    pub model: ExchangeModel,
    #[serde(default)]
    pub inputs: Vec<InputSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub tau_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub chi_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub l_grid: Option<Vec<usize>>,
    #[serde(default)]
    pub n_grid: Option<Vec<usize>>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub convention: Option<EpsilonConvention>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Only this chain site dephases; all sites do when absent.
    #[serde(default)]
    pub decohering_site: Option<usize>,
    #[serde(default)]
    pub method: DephaseMethod,
}

/// A validation failure pinned to the config field that caused it.
struct FieldError {
    field: &'static str,
    message: String,
}

fn field_err(field: &'static str, message: impl Into<String>) -> FieldError {
    FieldError { field, message: message.into() }
}

impl ScenarioConfig {
    pub fn new(kind: ScenarioKind) -> Self {
        Self {
            kind,
            n: None,
            theta: None,
            model: ExchangeModel::Xy,
            inputs: Vec::new(),
            seed: 0,
            repeats: DEFAULT_REPEATS,
            tau_grid: None,
            chi_grid: None,
            l_grid: None,
            n_grid: None,
            epsilon: None,
            convention: None,
            gamma: DEFAULT_GAMMA,
            decohering_site: None,
            method: DephaseMethod::Exact,
        }
    }

    /// Parses and validates a JSON config. Errors carry the line of the
    /// offending field where it can be located.
    pub fn from_json(src: &str) -> Result<Self> {
        let cfg: ScenarioConfig =
            serde_json::from_str(src).map_err(|e| Error::Config { line: Some(e.line()), message: e.to_string() })?;
        cfg.check().map_err(|e| Error::Config { line: line_of(src, e.field), message: e.message })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.check().map_err(|e| Error::Config { line: None, message: format!("{}: {}", e.field, e.message) })
    }

    pub fn chain_len(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::Config { line: None, message: "n: chain length is required".into() })
    }

    pub fn theta_spec(&self) -> Result<&ThetaSpec> {
        self.theta
            .as_ref()
            .ok_or_else(|| Error::Config { line: None, message: "theta: an angle spec is required".into() })
    }

    pub fn input_qubits(&self) -> usize {
        self.inputs.iter().map(InputSpec::qubits).sum()
    }

    pub fn profile(&self) -> DephasingProfile {
        match self.decohering_site {
            Some(site) => DephasingProfile::SingleSite { site, gamma: self.gamma },
            None => DephasingProfile::Homogeneous(self.gamma),
        }
    }

    fn check(&self) -> std::result::Result<(), FieldError> {
        use ScenarioKind::*;
        if self.repeats == 0 {
            return Err(field_err("repeats", "must be at least 1"));
        }
        if let Some(n) = self.n {
            if n == 0 {
                return Err(field_err("n", "chain length must be positive"));
            }
        } else if !matches!(self.kind, ChiSweep | Moments) {
            return Err(field_err("kind", "this scenario needs a chain length `n`"));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(field_err("epsilon", format!("must lie in (0, 1), got {eps}")));
            }
        }
        if let Some(theta) = &self.theta {
            check_theta(theta)?;
        }
        let needs_theta = matches!(self.kind, EncodeDecode | DephasingCurve | Distribution | ThetaVariation | Moments);
        if needs_theta && self.theta.is_none() {
            return Err(field_err("kind", "this scenario needs a `theta` spec"));
        }
        if matches!(self.kind, Distribution | Moments) && !matches!(self.theta, Some(ThetaSpec::Fixed { .. })) {
            return Err(field_err("theta", "closed-form scenarios need a fixed angle"));
        }
        let grid_nonempty = |g: &Option<Vec<f64>>, name: &'static str| match g {
            Some(v) if v.is_empty() => Err(field_err(name, "grid must not be empty")),
            Some(v) if v.iter().any(|x| !x.is_finite()) => Err(field_err(name, "grid values must be finite")),
            _ => Ok(()),
        };
        grid_nonempty(&self.tau_grid, "tau_grid")?;
        grid_nonempty(&self.chi_grid, "chi_grid")?;
        if matches!(&self.l_grid, Some(v) if v.is_empty()) {
            return Err(field_err("l_grid", "grid must not be empty"));
        }
        if let Some(g) = &self.n_grid {
            if g.is_empty() || g.contains(&0) {
                return Err(field_err("n_grid", "chain lengths must be positive and the grid non-empty"));
            }
        }
        if let Some(t) = &self.tau_grid {
            if t.iter().any(|&x| x < 0.0) {
                return Err(field_err("tau_grid", "storage times must be non-negative"));
            }
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(field_err("gamma", "dephasing rate must be finite and non-negative"));
        }
        if let (Some(site), Some(n)) = (self.decohering_site, self.n) {
            if site == 0 || site > n {
                return Err(field_err("decohering_site", format!("must lie in 1..={n}")));
            }
        }
        match self.kind {
            EncodeDecode | ThetaVariation => {
                if self.inputs.is_empty() {
                    return Err(field_err("inputs", "at least one input state is required"));
                }
            }
            DephasingCurve | ChiSweep => {
                if self.input_qubits() > 1 || self.inputs.iter().any(|i| i.qubits() != 1) {
                    return Err(field_err("inputs", "this scenario stores a single qubit"));
                }
            }
            Distribution | Moments => {}
        }
        Ok(())
    }
}

fn check_theta(theta: &ThetaSpec) -> std::result::Result<(), FieldError> {
    let ok_angle = |t: f64| t.is_finite() && t > 0.0 && t <= FRAC_PI_2 + 1e-12;
    match theta {
        ThetaSpec::Fixed { value } if !ok_angle(*value) => {
            Err(field_err("theta", format!("angle must lie in (0, π/2], got {value}")))
        }
        ThetaSpec::PerSiteBand { center, width } | ThetaSpec::PerRoundBand { center, width } => {
            if !(*width >= 0.0 && width.is_finite()) {
                Err(field_err("theta", format!("band width must be ≥ 0, got {width}")))
            } else if !ok_angle(*center) {
                Err(field_err("theta", format!("band center must lie in (0, π/2], got {center}")))
            } else {
                Ok(())
            }
        }
        ThetaSpec::Storage { sites, epsilon } if *sites == 0 || !(*epsilon > 0.0 && *epsilon < 1.0) => {
            Err(field_err("theta", "storage spec needs sites ≥ 1 and epsilon in (0, 1)"))
        }
        _ => Ok(()),
    }
}

/// 1-based line of the first `"key"` in `src`.
fn line_of(src: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    src.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn input_names_round_trip() {
        for s in ["up", "down", "plus", "minus", "bell-phi-minus", "bell-psi-minus", "random(4)"] {
            assert_eq!(s.parse::<InputSpec>().unwrap().to_string(), s);
        }
        assert!("random(0)".parse::<InputSpec>().is_err());
        assert!("sideways".parse::<InputSpec>().is_err());
    }

    #[test]
    fn minimal_config_parses() {
        let src = r#"{ "kind": "encode_decode", "n": 8, "theta": {"type": "fixed", "value": 1.1},
                      "inputs": ["bell-phi-minus"] }"#;
        let cfg = ScenarioConfig::from_json(src).unwrap();
        assert_eq!(cfg.repeats, DEFAULT_REPEATS);
        assert_eq!(cfg.input_qubits(), 2);
    }

    #[test]
    fn errors_point_at_the_field() {
        let src = "{\n  \"kind\": \"dephasing_curve\",\n  \"n\": 10,\n  \"theta\": {\"type\": \"fixed\", \"value\": 1.0},\n  \"tau_grid\": []\n}";
        match ScenarioConfig::from_json(src) {
            Err(Error::Config { line: Some(5), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let src = "{\n  \"kind\": \"moments\",\n  \"n\": 10,\n  \"theta\": {\"type\": \"fixed\", \"value\": 1.0},\n  \"bogus\": 1\n}";
        assert!(matches!(ScenarioConfig::from_json(src), Err(Error::Config { line: Some(_), .. })));
    }

    #[test]
    fn storage_spec_single_site_is_swap() {
        let t = ThetaSpec::Storage { sites: 1, epsilon: 1e-2 };
        assert_eq!(t.nominal().unwrap(), FRAC_PI_2);
        let t = ThetaSpec::Storage { sites: 100, epsilon: 1e-2 };
        assert!((t.nominal().unwrap() - 0.30116).abs() < 1e-4);
    }
}
