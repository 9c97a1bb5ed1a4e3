use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Serialize;

use super::branch::{measure_with, OutcomeSource, RngSource};
use super::flow::z_dependency_set;
use super::graph::NodeId;
use super::pattern::{MeasurementPattern, QubitLayout};
use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::sim::{GateKind, StateVector};

/// How classical input bits reach the input nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputEncoding {
    /// The server prepares `|+⟩`; the bit is a Z key the client folds into
    /// corrections.
    #[default]
    KeyHidden,
    /// The input node is physically prepared as `Z^k|+⟩` and no key is kept.
    Direct,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OutcomeLedger {
    /// Raw outcomes, including raw output readouts.
    pub s: BTreeMap<NodeId, u8>,
    /// Corrected outcomes.
    pub b: BTreeMap<NodeId, u8>,
    /// Companion outcomes of π/4 nodes.
    pub alpha: BTreeMap<NodeId, u8>,
    pub zdeps: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl OutcomeLedger {
    pub(crate) fn for_pattern(pattern: &MeasurementPattern) -> Self {
        let g = pattern.graph();
        OutcomeLedger {
            zdeps: g
                .nodes()
                .iter()
                .map(|&n| (n, z_dependency_set(g, pattern.flow(), n)))
                .collect(),
            ..OutcomeLedger::default()
        }
    }

    pub(crate) fn s_parity(&self, nodes: &BTreeSet<NodeId>) -> Result<u8> {
        nodes.iter().try_fold(0, |acc, n| {
            self.s
                .get(n)
                .map(|v| acc ^ v)
                .ok_or(Error::MissingOutcome(*n))
        })
    }
}

/// `φ' = (−1)^{s_x}·φ + π·z_parity`.
pub fn corrected_angle(phi: Angle, s_x: u8, z_parity: u8) -> Angle {
    let a = if s_x & 1 == 1 { -phi } else { phi };
    if z_parity & 1 == 1 {
        a.plus_pi()
    } else {
        a
    }
}

pub(crate) fn check_inputs(pattern: &MeasurementPattern, input_bits: &[u8]) -> Result<()> {
    let expected = pattern.graph().inputs().len();
    if input_bits.len() != expected {
        return Err(Error::InputLength {
            expected,
            got: input_bits.len(),
        });
    }
    if let Some(&b) = input_bits.iter().find(|&&b| b > 1) {
        return Err(Error::Pattern(format!("input bit {b} is not 0 or 1")));
    }
    Ok(())
}

/// Bit `input_bits[k]` for the `k`-th input, zero elsewhere.
pub(crate) fn input_key(pattern: &MeasurementPattern, input_bits: &[u8], n: NodeId) -> u8 {
    pattern
        .graph()
        .input_position(n)
        .map_or(0, |k| input_bits[k])
}

/// `ψ` on the input qubits (or `|+⟩` everywhere), with the `Z^k` input
/// preparation applied when the encoding is direct.
pub(crate) fn initial_state(
    pattern: &MeasurementPattern,
    layout: &QubitLayout,
    input_state: Option<&StateVector>,
    input_bits: &[u8],
    encoding: InputEncoding,
) -> Result<StateVector> {
    let n = layout.num_qubits();
    let n_in = pattern.graph().inputs().len();
    let mut state = match input_state {
        None => {
            let mut s = StateVector::zero(n)?;
            for q in 0..layout.num_qubits() - layout.companions().len() {
                s.apply1(GateKind::H, q);
            }
            s
        }
        Some(psi) => {
            if psi.num_qubits() != n_in {
                return Err(Error::InputLength {
                    expected: n_in,
                    got: psi.num_qubits(),
                });
            }
            let rest = n - n_in;
            if rest == 0 {
                psi.clone()
            } else {
                let mut tail = StateVector::zero(rest)?;
                for q in 0..rest - layout.companions().len() {
                    tail.apply1(GateKind::H, q);
                }
                psi.tensor(&tail)?
            }
        }
    };
    if encoding == InputEncoding::Direct {
        for (k, &i) in pattern.graph().inputs().iter().enumerate() {
            if input_bits[k] == 1 {
                state.apply1(GateKind::Z, layout.qubit(i));
            }
        }
    }
    Ok(state)
}

pub(crate) fn entangle(
    pattern: &MeasurementPattern,
    layout: &QubitLayout,
    state: &mut StateVector,
) {
    for &(a, b) in pattern.graph().edges() {
        state.apply2(GateKind::CZ, layout.qubit(a), layout.qubit(b));
    }
}

/// Prepares the graph state and measures every non-output node at its corrected
/// angle. Measured qubits are left in the computational state `|s⟩`.
pub(crate) fn interactive_core<S: OutcomeSource + ?Sized>(
    pattern: &MeasurementPattern,
    input_state: Option<&StateVector>,
    input_bits: &[u8],
    encoding: InputEncoding,
    src: &mut S,
) -> Result<(StateVector, QubitLayout, OutcomeLedger)> {
    check_inputs(pattern, input_bits)?;
    let layout = QubitLayout::new(pattern, false);
    let mut state = initial_state(pattern, &layout, input_state, input_bits, encoding)?;
    entangle(pattern, &layout, &mut state);
    let mut ledger = OutcomeLedger::for_pattern(pattern);
    for &i in pattern.order() {
        let (x, z) = correction_bits(pattern, &ledger, input_bits, encoding, i)?;
        let phi = corrected_angle(pattern.angle(i).expect("validated"), x, z);
        let s = measure_with(&mut state, layout.qubit(i), phi, src)?;
        ledger.s.insert(i, s);
        ledger.b.insert(i, s);
    }
    Ok((state, layout, ledger))
}

/// The X and Z byproduct bits on node `i` given the raw outcomes so far.
pub(crate) fn correction_bits(
    pattern: &MeasurementPattern,
    ledger: &OutcomeLedger,
    input_bits: &[u8],
    encoding: InputEncoding,
    i: NodeId,
) -> Result<(u8, u8)> {
    let x = match pattern.flow().predecessor(i) {
        Some(p) => *ledger.s.get(&p).ok_or(Error::MissingOutcome(p))?,
        None => 0,
    };
    let mut z = ledger.s_parity(&ledger.zdeps[&i])?;
    if encoding == InputEncoding::KeyHidden {
        z ^= input_key(pattern, input_bits, i);
    }
    Ok((x, z))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractiveRun {
    pub ledger: OutcomeLedger,
    /// Corrected output bits in output order.
    pub outputs: Vec<u8>,
}

/// Runs the pattern with adaptive angles and reads the outputs in the
/// computational basis, undoing the X byproduct classically.
pub fn run_interactive<R: Rng + ?Sized>(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    rng: &mut R,
) -> Result<InteractiveRun> {
    run_interactive_with(pattern, input_bits, InputEncoding::KeyHidden, rng)
}

pub fn run_interactive_with<R: Rng + ?Sized>(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    encoding: InputEncoding,
    rng: &mut R,
) -> Result<InteractiveRun> {
    let (mut state, layout, mut ledger) = interactive_core(
        pattern,
        None,
        input_bits,
        encoding,
        &mut RngSource(&mut *rng),
    )?;
    let mut outputs = Vec::new();
    for &o in pattern.graph().outputs() {
        let (x, _) = correction_bits(pattern, &ledger, input_bits, encoding, o)?;
        let q = layout.qubit(o);
        let raw = RngSource(&mut *rng).pick(state.probability_of_one(q)?);
        state.project(q, raw)?;
        ledger.s.insert(o, raw);
        ledger.b.insert(o, raw ^ x);
        outputs.push(raw ^ x);
    }
    Ok(InteractiveRun { ledger, outputs })
}

/// Runs the pattern on `input_state` (the input qubits in input order) and
/// returns the corrected output state, in output order.
pub fn run_interactive_state<S: OutcomeSource + ?Sized>(
    pattern: &MeasurementPattern,
    input_state: Option<&StateVector>,
    input_bits: &[u8],
    encoding: InputEncoding,
    src: &mut S,
) -> Result<(OutcomeLedger, StateVector)> {
    let (mut state, layout, ledger) =
        interactive_core(pattern, input_state, input_bits, encoding, src)?;
    let mut keep = Vec::new();
    for &o in pattern.graph().outputs() {
        let (x, z) = correction_bits(pattern, &ledger, input_bits, encoding, o)?;
        let q = layout.qubit(o);
        if x == 1 {
            state.apply1(GateKind::X, q);
        }
        if z == 1 {
            state.apply1(GateKind::Z, q);
        }
        keep.push(q);
    }
    Ok((ledger, state.extract(&keep)?))
}
