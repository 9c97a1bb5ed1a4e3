use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::model::{flip_readout, sample_pauli, NoiseModel};
use crate::compile::{Circuit, Counts, Instruction};
use crate::error::{Error, Result};
use crate::sim::{GateKind, StateVector};

/// Checkpoints beyond this many amplitudes in total are thinned out.
const CHECKPOINT_BUDGET: usize = 1 << 23;

/// Greedy as-soon-as-possible layering of the gates of `circuit`. Each entry is
/// a list of instruction indices acting on disjoint wires.
pub fn schedule_layers(circuit: &Circuit) -> Vec<Vec<usize>> {
    let mut ready = vec![0usize; circuit.num_wires()];
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for (i, ins) in circuit.instructions().iter().enumerate() {
        if let Instruction::Gate { wires, .. } = ins {
            let layer = wires.iter().map(|&w| ready[w]).max().unwrap_or(0);
            if layer == layers.len() {
                layers.push(Vec::new());
            }
            layers[layer].push(i);
            for &w in wires {
                ready[w] = layer + 1;
            }
        }
    }
    layers
}

struct Layer {
    gates: Vec<(GateKind, Vec<usize>)>,
    idle: Vec<usize>,
}

/// The circuit restricted to the wires it uses, split into layers.
struct Plan {
    width: usize,
    layers: Vec<Layer>,
    readout: Vec<usize>,
}

impl Plan {
    fn new(circuit: &Circuit) -> Self {
        let mut used: Vec<usize> = (0..circuit.num_wires())
            .filter(|&w| circuit.instructions().iter().any(|i| i.touches(w)))
            .collect();
        used.sort_unstable();
        let mut compact = vec![usize::MAX; circuit.num_wires()];
        for (k, &w) in used.iter().enumerate() {
            compact[w] = k;
        }
        let layers = schedule_layers(circuit)
            .into_iter()
            .map(|idx| {
                let gates: Vec<(GateKind, Vec<usize>)> = idx
                    .iter()
                    .map(|&i| match &circuit.instructions()[i] {
                        Instruction::Gate { kind, wires } => {
                            (*kind, wires.iter().map(|&w| compact[w]).collect())
                        }
                        Instruction::Measure { .. } => unreachable!("layers hold gates only"),
                    })
                    .collect();
                let idle = (0..used.len())
                    .filter(|w| !gates.iter().any(|(_, ws)| ws.contains(w)))
                    .collect();
                Layer { gates, idle }
            })
            .collect();
        let readout = circuit
            .measurements()
            .iter()
            .map(|m| compact[m.0])
            .collect();
        Plan {
            width: used.len(),
            layers,
            readout,
        }
    }

    fn run_layer(&self, state: &mut StateVector, layer: usize) {
        for (g, ws) in &self.layers[layer].gates {
            match ws.as_slice() {
                [q] => state.apply1(*g, *q),
                [a, b] => state.apply2(*g, *a, *b),
                _ => unreachable!(),
            }
        }
    }
}

/// One Pauli to insert after a layer.
type Fault = (usize, usize, GateKind);

fn sample_faults<R: Rng + ?Sized>(plan: &Plan, model: &NoiseModel, rng: &mut R) -> Vec<Fault> {
    let mut faults = Vec::new();
    for (l, layer) in plan.layers.iter().enumerate() {
        for (_, ws) in &layer.gates {
            if let Some(paulis) = sample_pauli(ws.len(), model.gate_error(ws.len()), rng) {
                for (&w, g) in ws.iter().zip(paulis) {
                    if let Some(g) = g {
                        faults.push((l, w, g));
                    }
                }
            }
        }
        if model.p_idle > 0.0 {
            for &w in &layer.idle {
                if rng.random::<f64>() < model.p_idle {
                    faults.push((l, w, GateKind::Z));
                }
            }
        }
    }
    faults
}

fn cumulative(state: &StateVector) -> Vec<f64> {
    let mut acc = 0.0;
    state
        .amplitudes()
        .iter()
        .map(|a| {
            acc += a.norm_sqr();
            acc
        })
        .collect()
}

fn draw(cdf: &[f64], rng: &mut impl Rng) -> usize {
    let r = rng.random::<f64>() * cdf.last().copied().unwrap_or(1.0);
    cdf.partition_point(|&c| c <= r).min(cdf.len() - 1)
}

struct Executor<'a> {
    plan: Plan,
    model: &'a NoiseModel,
    /// `checkpoints[k]` is the noiseless state before layer `k · stride`.
    checkpoints: Vec<StateVector>,
    stride: usize,
    clean_cdf: Vec<f64>,
}

impl<'a> Executor<'a> {
    fn new(circuit: &Circuit, model: &'a NoiseModel) -> Result<Self> {
        let plan = Plan::new(circuit);
        let dim = 1usize << plan.width;
        let stride = (plan.layers.len() * dim).div_ceil(CHECKPOINT_BUDGET).max(1);
        let mut state = StateVector::zero(plan.width.max(1))?;
        let mut checkpoints = Vec::new();
        for l in 0..plan.layers.len() {
            if l % stride == 0 {
                checkpoints.push(state.clone());
            }
            plan.run_layer(&mut state, l);
        }
        let clean_cdf = cumulative(&state);
        Ok(Executor {
            plan,
            model,
            checkpoints,
            stride,
            clean_cdf,
        })
    }

    fn shot(&self, rng: &mut ChaCha8Rng) -> String {
        let faults = sample_faults(&self.plan, self.model, rng);
        let index = match faults.first() {
            None => draw(&self.clean_cdf, rng),
            Some(&(first, ..)) => {
                let k = first / self.stride;
                let mut state = self.checkpoints[k].clone();
                let mut pending = faults.iter().peekable();
                for l in k * self.stride..self.plan.layers.len() {
                    self.plan.run_layer(&mut state, l);
                    while let Some(&&(fl, w, g)) = pending.peek() {
                        if fl != l {
                            break;
                        }
                        state.apply1(g, w);
                        pending.next();
                    }
                }
                draw(&cumulative(&state), rng)
            }
        };
        self.plan
            .readout
            .iter()
            .map(|&w| {
                let bit = (index >> w & 1) as u8;
                if flip_readout(bit, self.model.p_ro, rng) == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

/// Seeds the generator of shot `shot` from a base seed.
pub fn shot_rng(base: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(shot);
    rng
}

/// Monte Carlo trajectories of a terminal-measurement circuit. Each gate is
/// followed by a depolarizing event, each ASAP layer by dephasing of its idle
/// wires, and each readout may flip. One base seed is drawn from `rng`; shot
/// `k` then runs on its own stream, so results do not depend on scheduling.
pub fn noisy_execute<R: Rng + ?Sized>(
    circuit: &Circuit,
    model: &NoiseModel,
    shots: u64,
    rng: &mut R,
) -> Result<Counts> {
    noisy_execute_seeded(circuit, model, shots, rng.random())
}

pub fn noisy_execute_seeded(
    circuit: &Circuit,
    model: &NoiseModel,
    shots: u64,
    base: u64,
) -> Result<Counts> {
    if !circuit.has_terminal_measurements() {
        return Err(Error::Circuit("measurements must be terminal".into()));
    }
    let exec = Executor::new(circuit, model)?;
    let merge = |mut a: Counts, b: Counts| {
        for (k, v) in b {
            *a.entry(k).or_insert(0) += v;
        }
        a
    };
    Ok((0..shots)
        .into_par_iter()
        .fold(Counts::new, |mut acc, s| {
            *acc.entry(exec.shot(&mut shot_rng(base, s))).or_insert(0) += 1;
            acc
        })
        .reduce(Counts::new, merge))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering() {
        let mut c = Circuit::new(3);
        c.add(GateKind::H, &[0]);
        c.add(GateKind::H, &[1]);
        c.add(GateKind::CNOT, &[0, 1]);
        c.add(GateKind::X, &[2]);
        c.add(GateKind::Z, &[1]);
        c.measure(0, "a").unwrap();
        assert_eq!(schedule_layers(&c), vec![vec![0, 1, 3], vec![2], vec![4]]);
        let plan = Plan::new(&c);
        assert_eq!(plan.layers[1].idle, vec![2]);
        assert_eq!(plan.layers[2].idle, vec![0, 2]);
    }

    #[test]
    fn unused_wires_are_dropped() {
        let mut c = Circuit::new(5);
        c.add(GateKind::X, &[3]);
        c.measure(3, "a").unwrap();
        c.measure(1, "b").unwrap();
        let plan = Plan::new(&c);
        assert_eq!(plan.width, 2);
        assert_eq!(plan.readout, vec![1, 0]);
        let counts = noisy_execute_seeded(&c, &NoiseModel::zero(), 50, 0).unwrap();
        assert_eq!(counts, Counts::from([("10".to_string(), 50)]));
    }

    #[test]
    fn repeatable() {
        let mut c = Circuit::new(2);
        c.add(GateKind::H, &[0]);
        c.add(GateKind::CNOT, &[0, 1]);
        c.measure(0, "a").unwrap();
        c.measure(1, "b").unwrap();
        let m = NoiseModel::new(0.1, 0.2, 0.05, 0.1).unwrap();
        let a = noisy_execute_seeded(&c, &m, 500, 9).unwrap();
        assert_eq!(a, noisy_execute_seeded(&c, &m, 500, 9).unwrap());
        assert_eq!(a.values().sum::<u64>(), 500);
    }
}
