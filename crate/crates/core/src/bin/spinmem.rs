// Copyright 2026 The spinmem Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinmem::experiments::{
    emit, render, InputSpec, OutputFormat, ScenarioConfig, ScenarioKind, ScenarioResult, ThetaSpec,
};
use spinmem::noise::DephaseMethod;
use spinmem::protocol::{min_chain_length, EpsilonConvention, ExchangeModel};
use spinmem::{Error, Result};

#[derive(Parser)]
#[command(name = "spinmem", version, about = "Passive spin-chain quantum memory simulator")]
struct Cli {
    /// Log level (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    log: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Chain length. Derived from --theta and --epsilon when omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Coupling angle per flying–static encounter.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, default_value = "xy")]
    model: ExchangeModel,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Storage tolerance ε.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value = "prob")]
    convention: EpsilonConvention,
}

#[derive(Subcommand)]
enum Command {
    /// Store inputs, read them back and report fidelities and tomograms.
    EncodeDecode {
        #[command(flatten)]
        common: Common,
        /// Comma-separated: up, down, plus, minus, bell-phi-minus, bell-psi-minus, random(k).
        #[arg(long, default_value = "plus", value_delimiter = ',')]
        inputs: Vec<InputSpec>,
        /// Draw per-site angles from theta·(1 ± width) each repeat.
        #[arg(long)]
        site_width: Option<f64>,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
    },
    /// Retrieved fidelity against storage time under chain dephasing.
    Dephasing {
        #[command(flatten)]
        common: Common,
        /// Dephasing rate Γ in s⁻¹.
        #[arg(long, default_value_t = 1e6)]
        gamma: f64,
        /// Only this chain site dephases (all sites when omitted).
        #[arg(long)]
        site: Option<usize>,
        /// Choose θ so that this many sites hold the qubit (amplitude residual --epsilon, default 0.01).
        #[arg(long)]
        storage_sites: Option<usize>,
        #[arg(long, default_value_t = 5e-6)]
        tau_max: f64,
        #[arg(long, default_value_t = 50)]
        tau_steps: usize,
        #[arg(long, default_value = "exact")]
        method: String,
        #[arg(long, default_value = "plus")]
        input: InputSpec,
    },
    /// Simulated against closed-form single down-flip distributions.
    Distribution {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0,1,2", value_delimiter = ',')]
        levels: Vec<usize>,
    },
    /// Fidelity when the read angle differs from the write angle by a fraction χ.
    ChiSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        n_grid: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0.1)]
        chi_max: f64,
        #[arg(long, default_value_t = 20)]
        chi_steps: usize,
    },
    /// Several qubits stored in sequence, each with its own angle band.
    ThetaVariation {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "random(4)", value_delimiter = ',')]
        inputs: Vec<InputSpec>,
        /// Per-qubit angles from theta·(1 ± width); 0 keeps theta fixed.
        #[arg(long, default_value_t = 0.0)]
        width: f64,
        /// Vary the angle site by site instead of qubit by qubit.
        #[arg(long)]
        per_site: bool,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
    },
    /// Mean and spread of the stored excitation profile against level l.
    Moments {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0,1,2,3,4,5,6,7,8,9,10", value_delimiter = ',')]
        levels: Vec<usize>,
    },
    /// Run a JSON scenario config.
    Scenario {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
}

impl Common {
    fn base(&self, kind: ScenarioKind, default_theta: f64) -> Result<ScenarioConfig> {
        let mut c = ScenarioConfig::new(kind);
        c.model = self.model;
        c.seed = self.seed;
        c.epsilon = self.epsilon;
        c.convention = Some(self.convention);
        let theta = match (self.theta, self.epsilon, self.n) {
            (Some(t), _, _) => Some(t),
            // angle at which exactly n sites meet ε
            (None, Some(eps), Some(n)) => Some(match self.convention {
                EpsilonConvention::AmplitudeCosN => eps.powf(1.0 / n as f64).acos(),
                EpsilonConvention::ProbabilityCos2N => eps.powf(0.5 / n as f64).acos(),
            }),
            _ => None,
        };
        c.n = match (self.n, theta, self.epsilon) {
            (Some(n), _, _) => Some(n),
            (None, Some(t), Some(eps)) => Some(min_chain_length(t, eps, self.convention)?),
            _ => None,
        };
        c.theta = Some(ThetaSpec::Fixed { value: theta.unwrap_or(default_theta) });
        Ok(c)
    }
}

fn build(command: &Command) -> Result<(ScenarioConfig, Option<PathBuf>, OutputFormat)> {
    let (cfg, common) = match command {
        Command::EncodeDecode { common, inputs, site_width, repeats } => {
            let mut c = common.base(ScenarioKind::EncodeDecode, 1.0)?;
            c.inputs = inputs.clone();
            c.repeats = *repeats;
            if let (Some(width), Some(ThetaSpec::Fixed { value })) = (site_width, &c.theta) {
                c.theta = Some(ThetaSpec::PerSiteBand { center: *value, width: *width });
            }
            (c, common)
        }
        Command::Dephasing { common, gamma, site, storage_sites, tau_max, tau_steps, method, input } => {
            let mut c = common.base(ScenarioKind::DephasingCurve, std::f64::consts::FRAC_PI_2)?;
            if let Some(sites) = storage_sites {
                c.theta = Some(ThetaSpec::Storage { sites: *sites, epsilon: common.epsilon.unwrap_or(1e-2) });
            }
            c.gamma = *gamma;
            c.decohering_site = *site;
            c.inputs = vec![*input];
            c.method = match method.as_str() {
                "exact" => DephaseMethod::Exact,
                "rk4" => DephaseMethod::Rk4,
                other => return Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
            };
            let steps = (*tau_steps).max(1);
            c.tau_grid = Some((0..=steps).map(|i| tau_max * i as f64 / steps as f64).collect());
            (c, common)
        }
        Command::Distribution { common, levels } => {
            let mut c = common.base(ScenarioKind::Distribution, 1.2)?;
            c.n = c.n.or(Some(9));
            c.l_grid = Some(levels.clone());
            (c, common)
        }
        Command::ChiSweep { common, n_grid, chi_max, chi_steps } => {
            let mut c = common.base(ScenarioKind::ChiSweep, 1.0)?;
            if common.theta.is_none() {
                c.theta = None;
            }
            c.n_grid = n_grid.clone().or(c.n.map(|n| vec![n]));
            c.n = None;
            if common.epsilon.is_none() {
                c.convention = Some(EpsilonConvention::AmplitudeCosN);
            }
            let steps = (*chi_steps).max(1);
            c.chi_grid = Some((0..=steps).map(|i| -chi_max + 2.0 * chi_max * i as f64 / steps as f64).collect());
            (c, common)
        }
        Command::ThetaVariation { common, inputs, width, per_site, repeats } => {
            let mut c = common.base(ScenarioKind::ThetaVariation, 1.0)?;
            c.n = c.n.or(Some(9));
            c.inputs = inputs.clone();
            c.repeats = *repeats;
            if let Some(ThetaSpec::Fixed { value }) = c.theta {
                if *width > 0.0 {
                    c.theta = Some(if *per_site {
                        ThetaSpec::PerSiteBand { center: value, width: *width }
                    } else {
                        ThetaSpec::PerRoundBand { center: value, width: *width }
                    });
                }
            }
            (c, common)
        }
        Command::Moments { common, levels } => {
            let mut c = common.base(ScenarioKind::Moments, 0.4)?;
            c.l_grid = Some(levels.clone());
            (c, common)
        }
        Command::Scenario { config, out, format } => {
            let src = fs::read_to_string(config).map_err(|e| Error::Io { path: config.clone(), source: e })?;
            return Ok((ScenarioConfig::from_json(&src)?, out.clone(), *format));
        }
    };
    Ok((cfg, common.out.clone(), common.format))
}

fn report(result: &ScenarioResult) {
    for (k, v) in &result.summary {
        eprintln!("{k} = {v:e}");
    }
    eprintln!("seed = {}  config_hash = {}", result.provenance.seed, result.provenance.config_hash);
}

fn run(cli: &Cli) -> Result<()> {
    let (config, out, format) = build(&cli.command)?;
    let result = spinmem::experiments::run_scenario(&config)?;
    report(&result);
    match out {
        Some(path) => emit(&result, format, &path),
        None => {
            let text = render(&result, format)?;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::Io { path: PathBuf::from("<stdout>"), source: e })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    env_logger::Builder::new().parse_filters(&cli.log).init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
