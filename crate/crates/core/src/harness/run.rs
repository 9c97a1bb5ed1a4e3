use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::table::{CountsTable, InputCounts};
use super::{input_bits, stats};
use crate::compile::{
    apply_masks, compile_qfhe_to_circuit, load_coupling, load_placement, CouplingMap, Placement,
};
use crate::error::{Error, Result};
use crate::mbqc::{load_pattern, run_interactive, MeasurementPattern, NodeId};
use crate::noise::{load_noise, noisy_execute_seeded, schedule_layers, shot_rng, NoiseModel};
use crate::qfhe::{enumerate_branches, marginals, run_qfhe, Mode as BranchMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Interactive,
    Qfhe,
    QfheCircuit,
    QfheCircuitNoisy,
}

impl Mode {
    pub const ALL: [Mode; 4] = [
        Mode::Interactive,
        Mode::Qfhe,
        Mode::QfheCircuit,
        Mode::QfheCircuitNoisy,
    ];

    pub fn is_circuit(self) -> bool {
        matches!(self, Mode::QfheCircuit | Mode::QfheCircuitNoisy)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Interactive => "interactive",
            Mode::Qfhe => "qfhe",
            Mode::QfheCircuit => "qfhe-circuit",
            Mode::QfheCircuitNoisy => "qfhe-circuit-noisy",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown mode `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub pattern: PathBuf,
    /// `None` means every input `0..2^|I|`.
    pub inputs: Option<Vec<u64>>,
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<PathBuf>,
    pub coupling: Option<PathBuf>,
    pub placement: Option<PathBuf>,
    pub out: PathBuf,
    pub dump_transcript: bool,
}

impl ExperimentConfig {
    pub const DEFAULT_SHOTS: u64 = 1000;

    pub fn new(mode: Mode, pattern: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            mode,
            pattern: pattern.into(),
            inputs: None,
            shots: Self::DEFAULT_SHOTS,
            seed: 0,
            noise: None,
            coupling: None,
            placement: None,
            out: out.into(),
            dump_transcript: false,
        }
    }
}

/// Everything a run needs, already parsed.
#[derive(Clone, Debug)]
pub struct Setup {
    pub mode: Mode,
    pub pattern: MeasurementPattern,
    pub inputs: Option<Vec<u64>>,
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseModel>,
    pub coupling: Option<CouplingMap>,
    pub placement: Option<Placement>,
    pub transcript: bool,
}

impl Setup {
    pub fn new(mode: Mode, pattern: MeasurementPattern) -> Self {
        Setup {
            mode,
            pattern,
            inputs: None,
            shots: ExperimentConfig::DEFAULT_SHOTS,
            seed: 0,
            noise: None,
            coupling: None,
            placement: None,
            transcript: false,
        }
    }

    /// Loads every file named by `config`.
    pub fn load(config: &ExperimentConfig) -> Result<Self> {
        let pattern = load_pattern(&config.pattern)?;
        let noise = config.noise.as_deref().map(load_noise).transpose()?;
        let coupling = config.coupling.as_deref().map(load_coupling).transpose()?;
        let placement = match (&config.placement, &coupling) {
            (Some(p), Some(c)) => Some(load_placement(p, c.num_nodes())?),
            (Some(_), None) => {
                return Err(Error::Config("--placement needs --coupling".into()));
            }
            (None, _) => None,
        };
        Ok(Setup {
            mode: config.mode,
            pattern,
            inputs: config.inputs.clone(),
            shots: config.shots,
            seed: config.seed,
            noise,
            coupling,
            placement,
            transcript: config.dump_transcript,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternSummary {
    pub nodes: usize,
    pub inputs: Vec<NodeId>,
    pub outputs: Vec<NodeId>,
    pub quarter_pi_nodes: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitSummary {
    pub input: u64,
    pub instructions: usize,
    pub two_qubit_gates: usize,
    pub layers: usize,
    pub swaps: usize,
    pub controlled_sdg: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ServerRow {
    pub input: u64,
    /// Uncorrected 1-counts of each output readout.
    pub raw_output_ones: Vec<u64>,
}

/// What the server could tabulate on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ServerSection {
    pub angles: BTreeMap<NodeId, u8>,
    pub companions: Vec<NodeId>,
    pub shots: u64,
    pub rows: Vec<ServerRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub mode: Mode,
    pub seed: u64,
    pub shots: u64,
    pub inputs: Vec<u64>,
    pub pattern: PatternSummary,
    pub noise: Option<NoiseModel>,
    pub circuits: Option<Vec<CircuitSummary>>,
    pub table: CountsTable,
    /// Exact noiseless 1-probabilities per input and output, when the pattern
    /// is small enough to enumerate.
    pub exact: Option<Vec<Vec<f64>>>,
    pub noise_deviation: Option<f64>,
    pub server_view: Option<ServerSection>,
}

#[derive(Clone, Debug)]
pub struct Experiment {
    pub report: Report,
    /// Shot-0 protocol transcript per input, when requested.
    pub transcripts: Option<String>,
    pub wall_time: Duration,
}

/// Independent base seed for one classical input.
pub fn input_seed(seed: u64, input: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(input);
    rng.next_u64()
}

fn merge_counts(mut a: BTreeMap<String, u64>, b: BTreeMap<String, u64>) -> BTreeMap<String, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

fn bits_string(bits: &[u8]) -> String {
    bits.iter()
        .map(|&b| if b == 1 { '1' } else { '0' })
        .collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment> {
    run_setup(&Setup::load(config)?)
}

pub fn run_setup(setup: &Setup) -> Result<Experiment> {
    let start = Instant::now();
    let pattern = &setup.pattern;
    let g = pattern.graph();
    let width = g.inputs().len();
    let limit = 1u64.checked_shl(width as u32).unwrap_or(u64::MAX);
    let inputs = setup.inputs.clone().unwrap_or_else(|| (0..limit).collect());
    if let Some(&bad) = inputs.iter().find(|&&k| k >= limit) {
        return Err(Error::Config(format!("input {bad} is outside 0..{limit}")));
    }
    if setup.shots == 0 {
        return Err(Error::Config("shots must be at least 1".into()));
    }
    if setup.mode != Mode::Interactive {
        pattern.check_allowed_angles()?;
    }
    if setup.transcript && setup.mode != Mode::Qfhe {
        return Err(Error::Config("transcripts exist only in qfhe mode".into()));
    }
    let coupling = match (setup.mode.is_circuit(), &setup.coupling) {
        (true, None) => {
            return Err(Error::Config(format!(
                "mode {} needs a coupling map",
                setup.mode
            )))
        }
        (true, Some(c)) => Some(c),
        (false, _) => None,
    };
    let noise = match (setup.mode, setup.noise) {
        (Mode::QfheCircuitNoisy, None) => {
            return Err(Error::Config(
                "mode qfhe-circuit-noisy needs a noise file".into(),
            ))
        }
        (Mode::QfheCircuitNoisy, Some(m)) => Some(m),
        _ => None,
    };

    let outputs = g.outputs().len();
    let mut table = CountsTable::new(setup.shots, outputs);
    let mut circuits = Vec::new();
    let mut server_rows = Vec::new();
    let mut transcripts = String::new();
    let mut exact = Some(Vec::new());

    for &k in &inputs {
        let bits = input_bits(k, width);
        let base = input_seed(setup.seed, k);
        let oracle_mode = if setup.mode == Mode::Interactive {
            BranchMode::Interactive
        } else {
            BranchMode::Qfhe
        };
        exact = match (exact, enumerate_branches(pattern, &bits, oracle_mode)) {
            (Some(mut rows), Ok(d)) => {
                rows.push(marginals(&d));
                Some(rows)
            }
            _ => None,
        };
        let joint = match setup.mode {
            Mode::Interactive => (0..setup.shots)
                .into_par_iter()
                .map(|s| {
                    let run = run_interactive(pattern, &bits, &mut shot_rng(base, s))?;
                    Ok::<_, Error>(BTreeMap::from([(bits_string(&run.outputs), 1)]))
                })
                .try_reduce(BTreeMap::new, |a, b| Ok(merge_counts(a, b)))?,
            Mode::Qfhe => {
                let (joint, raw) = (0..setup.shots)
                    .into_par_iter()
                    .map(|s| {
                        let run = run_qfhe(pattern, &bits, &mut shot_rng(base, s))?;
                        let raw: Vec<u64> =
                            run.server.raw_outputs.iter().map(|&b| b as u64).collect();
                        Ok::<_, Error>((BTreeMap::from([(bits_string(&run.outputs), 1)]), raw))
                    })
                    .try_reduce(
                        || (BTreeMap::new(), vec![0; outputs]),
                        |a, b| {
                            let raw = a.1.iter().zip(&b.1).map(|(x, y)| x + y).collect();
                            Ok((merge_counts(a.0, b.0), raw))
                        },
                    )?;
                server_rows.push(ServerRow {
                    input: k,
                    raw_output_ones: raw,
                });
                if setup.transcript {
                    let run = run_qfhe(pattern, &bits, &mut shot_rng(base, 0))?;
                    transcripts.push_str(&format!("# input {k}\n{}", run.transcript));
                }
                joint
            }
            Mode::QfheCircuit | Mode::QfheCircuitNoisy => {
                let coupling = coupling.expect("checked above");
                let placement = match &setup.placement {
                    Some(p) => p.clone(),
                    None => {
                        let (nodes, comps) = crate::compile::logical_wires(pattern);
                        Placement::new(
                            (0..nodes.len() + comps.len()).collect(),
                            coupling.num_nodes(),
                        )?
                    }
                };
                let cc = compile_qfhe_to_circuit(pattern, &bits, &placement, coupling)?;
                let circuit = &cc.routed.circuit;
                circuits.push(CircuitSummary {
                    input: k,
                    instructions: circuit.len(),
                    two_qubit_gates: circuit.two_qubit_gates().count(),
                    layers: schedule_layers(circuit).len(),
                    swaps: cc.routed.swaps,
                    controlled_sdg: cc.controlled_sdg_count,
                });
                let model = noise.unwrap_or_else(NoiseModel::zero);
                let raw = noisy_execute_seeded(circuit, &model, setup.shots, base)?;
                apply_masks(&raw, &cc.masks)?
            }
        };
        table.push(InputCounts::from_joint(k, outputs, joint)?)?;
    }

    let noise_deviation = match (&exact, setup.mode) {
        (Some(e), Mode::QfheCircuitNoisy) => stats::mean_abs_deviation(&table, e),
        _ => None,
    };
    let server_view = (setup.mode == Mode::Qfhe).then(|| ServerSection {
        angles: g
            .nodes()
            .iter()
            .filter_map(|&n| Some((n, pattern.angle(n)?.as_octant()?)))
            .collect(),
        companions: pattern.quarter_nodes(),
        shots: setup.shots,
        rows: server_rows,
    });
    let report = Report {
        mode: setup.mode,
        seed: setup.seed,
        shots: setup.shots,
        inputs,
        pattern: PatternSummary {
            nodes: g.nodes().len(),
            inputs: g.inputs().to_vec(),
            outputs: g.outputs().to_vec(),
            quarter_pi_nodes: pattern.quarter_nodes(),
        },
        noise,
        circuits: setup.mode.is_circuit().then_some(circuits),
        table,
        exact,
        noise_deviation,
        server_view,
    };
    Ok(Experiment {
        report,
        transcripts: setup.transcript.then_some(transcripts),
        wall_time: start.elapsed(),
    })
}
