use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::deferred::{correct_node, Mutation};
use super::keys::{client_basis, encode_input};
use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::mbqc::branch::measure_with;
use crate::mbqc::{
    check_inputs, entangle, initial_state, input_key, InputEncoding, MeasurementPattern, NodeId,
    OutcomeLedger, OutcomeSource, QubitLayout, RngSource,
};
use crate::sim::{GateKind, PauliBasis, StateVector};

/// Which Bell state joins a π/4 node to its companion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellVariant {
    /// `(|00⟩+|11⟩)/√2`.
    #[default]
    Phi,
    /// `(|01⟩+|10⟩)/√2`: an extra X on the companion.
    Psi,
}

impl BellVariant {
    /// Angle at which the companion is measured for the given basis. The extra X
    /// of the `Psi` variant mirrors the Y angle.
    pub fn basis_angle(self, basis: PauliBasis) -> Angle {
        match (self, basis) {
            (_, PauliBasis::X) => Angle::ZERO,
            (BellVariant::Phi, PauliBasis::Y) => Angle::THREE_HALF_PI,
            (BellVariant::Psi, PauliBasis::Y) => Angle::HALF_PI,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct QfheOptions {
    pub encoding: InputEncoding,
    pub bell: BellVariant,
    pub mutation: Mutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClientState {
    pub input_bits: Vec<u8>,
    pub z_keys: Vec<u8>,
    pub alpha: BTreeMap<NodeId, u8>,
    pub ledger: OutcomeLedger,
    pub basis_choices: BTreeMap<NodeId, PauliBasis>,
}

/// Everything the server sees: the graph it was told to build, the default
/// angles, and its own uncorrected outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ServerView {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
    /// Default angles in units of π/4.
    pub angles: BTreeMap<NodeId, u8>,
    /// Nodes whose Bell companions were handed to the client.
    pub companions: Vec<NodeId>,
    pub raw: BTreeMap<NodeId, u8>,
    /// Uncorrected output readouts, in output order.
    pub raw_outputs: Vec<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    ClientToServer,
    ServerToClient,
    ClientLocal,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::ClientToServer => "client->server",
            Direction::ServerToClient => "server->client",
            Direction::ClientLocal => "client-local",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub direction: Direction,
    pub kind: String,
    pub payload: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProtocolTranscript {
    pub messages: Vec<Message>,
}

impl ProtocolTranscript {
    fn push(&mut self, direction: Direction, kind: &str, payload: String) {
        self.messages.push(Message {
            direction,
            kind: kind.to_string(),
            payload,
        });
    }
}

impl fmt::Display for ProtocolTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.messages {
            writeln!(f, "{} {} {}", m.direction, m.kind, m.payload)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QfheRun {
    /// Corrected output bits, in output order.
    pub outputs: Vec<u8>,
    pub client: ClientState,
    pub server: ServerView,
    pub transcript: ProtocolTranscript,
}

/// Graph state with every π/4 node Bell-paired to its companion.
pub(crate) fn prepare(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    opts: QfheOptions,
) -> Result<(StateVector, QubitLayout)> {
    check_inputs(pattern, input_bits)?;
    pattern.check_allowed_angles()?;
    let layout = QubitLayout::new(pattern, true);
    let mut state = initial_state(pattern, &layout, None, input_bits, opts.encoding)?;
    for (&n, &c) in layout.companions() {
        state.apply2(GateKind::CNOT, layout.qubit(n), c);
        if opts.bell == BellVariant::Psi {
            state.apply1(GateKind::X, c);
        }
    }
    entangle(pattern, &layout, &mut state);
    Ok((state, layout))
}

/// Server phase: every non-output node measured at its default angle.
pub(crate) fn server_measure<S: OutcomeSource + ?Sized>(
    pattern: &MeasurementPattern,
    layout: &QubitLayout,
    state: &mut StateVector,
    src: &mut S,
) -> Result<BTreeMap<NodeId, u8>> {
    let mut raw = BTreeMap::new();
    for &i in pattern.order() {
        let phi = pattern.angle(i).expect("validated");
        raw.insert(i, measure_with(state, layout.qubit(i), phi, src)?);
    }
    Ok(raw)
}

/// Client phase over measured nodes: companion measurements and the correction
/// recursion. Returns corrected bits plus the companion bookkeeping.
#[allow(clippy::type_complexity)]
pub(crate) fn client_correct<S: OutcomeSource + ?Sized>(
    pattern: &MeasurementPattern,
    layout: &QubitLayout,
    state: &mut StateVector,
    raw: &BTreeMap<NodeId, u8>,
    input_bits: &[u8],
    opts: QfheOptions,
    src: &mut S,
) -> Result<(
    BTreeMap<NodeId, u8>,
    BTreeMap<NodeId, u8>,
    BTreeMap<NodeId, PauliBasis>,
)> {
    let mut b = BTreeMap::new();
    let mut alpha = BTreeMap::new();
    let mut bases = BTreeMap::new();
    for &i in pattern.order() {
        let key = match opts.encoding {
            InputEncoding::KeyHidden => input_key(pattern, input_bits, i),
            InputEncoding::Direct => 0,
        };
        let v = correct_node(pattern, &b, key, i, raw[&i], opts.mutation, |x: &u8| {
            let basis = client_basis(*x);
            let c = layout.companion(i).ok_or(Error::MissingAlpha(i))?;
            let a = measure_with(state, c, opts.bell.basis_angle(basis), src)?;
            bases.insert(i, basis);
            alpha.insert(i, a);
            Ok(a)
        })?;
        b.insert(i, v);
    }
    Ok((b, alpha, bases))
}

/// X correction on each output's computational readout, in output order.
pub(crate) fn output_flips(pattern: &MeasurementPattern, b: &BTreeMap<NodeId, u8>) -> Vec<u8> {
    pattern
        .graph()
        .outputs()
        .iter()
        .map(|&o| {
            correct_node(pattern, b, 0, o, 0u8, Mutation::None, |_| unreachable!())
                .expect("outputs depend only on measured nodes")
        })
        .collect()
}

pub fn run_qfhe<R: Rng + ?Sized>(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    rng: &mut R,
) -> Result<QfheRun> {
    run_qfhe_with(pattern, input_bits, QfheOptions::default(), rng)
}

/// One delegated run. The server measures everything at default angles and
/// returns raw outcomes; the client alone measures the Bell companions and
/// applies corrections afterwards.
pub fn run_qfhe_with<R: Rng + ?Sized>(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    opts: QfheOptions,
    rng: &mut R,
) -> Result<QfheRun> {
    let (mut state, layout) = prepare(pattern, input_bits, opts)?;
    let g = pattern.graph();
    let mut transcript = ProtocolTranscript::default();
    let list = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(",");
    transcript.push(
        Direction::ClientToServer,
        "graph",
        format!(
            "nodes={} edges={}",
            list(&mut g.nodes().iter().map(ToString::to_string)),
            list(&mut g.edges().iter().map(|(a, b)| format!("{a}-{b}"))),
        ),
    );
    let angles: BTreeMap<NodeId, u8> = pattern
        .angles()
        .iter()
        .map(|(&n, a)| (n, a.as_octant().expect("allowed angles are octants")))
        .collect();
    transcript.push(
        Direction::ClientToServer,
        "angles",
        list(&mut angles.iter().map(|(n, k)| format!("{n}:{k}"))),
    );
    let companions: Vec<NodeId> = layout.companions().keys().copied().collect();
    transcript.push(
        Direction::ClientToServer,
        "bell-pairs",
        list(&mut companions.iter().map(ToString::to_string)),
    );

    let mut src = RngSource(&mut *rng);
    let raw = server_measure(pattern, &layout, &mut state, &mut src)?;
    let mut raw_outputs = Vec::new();
    for &o in g.outputs() {
        let q = layout.qubit(o);
        let bit = src.pick(state.probability_of_one(q)?);
        state.project(q, bit)?;
        raw_outputs.push(bit);
    }
    for &i in pattern.order() {
        transcript.push(
            Direction::ServerToClient,
            "outcome",
            format!("node={i} s={}", raw[&i]),
        );
    }
    for (&o, &bit) in g.outputs().iter().zip(&raw_outputs) {
        transcript.push(
            Direction::ServerToClient,
            "output",
            format!("node={o} s={bit}"),
        );
    }
    for &c in &companions {
        transcript.push(Direction::ServerToClient, "bell-half", format!("node={c}"));
    }

    let (b, alpha, bases) = client_correct(
        pattern, &layout, &mut state, &raw, input_bits, opts, &mut src,
    )?;
    let flips = output_flips(pattern, &b);
    let outputs: Vec<u8> = raw_outputs.iter().zip(&flips).map(|(r, f)| r ^ f).collect();

    let mut ledger = OutcomeLedger::for_pattern(pattern);
    ledger.s = raw.clone();
    ledger.b = b.clone();
    ledger.alpha = alpha.clone();
    for (k, &o) in g.outputs().iter().enumerate() {
        ledger.s.insert(o, raw_outputs[k]);
        ledger.b.insert(o, outputs[k]);
    }
    for &i in pattern.order() {
        if let Some(basis) = bases.get(&i) {
            transcript.push(
                Direction::ClientLocal,
                "basis",
                format!("node={i} basis={basis:?}"),
            );
            transcript.push(
                Direction::ClientLocal,
                "alpha",
                format!("node={i} alpha={}", alpha[&i]),
            );
        }
        transcript.push(
            Direction::ClientLocal,
            "correction",
            format!("node={i} b={}", b[&i]),
        );
    }
    for (&o, &bit) in g.outputs().iter().zip(&outputs) {
        transcript.push(
            Direction::ClientLocal,
            "output",
            format!("node={o} b={bit}"),
        );
    }

    let z_keys = match opts.encoding {
        InputEncoding::KeyHidden => encode_input(input_bits),
        InputEncoding::Direct => vec![0; input_bits.len()],
    };
    Ok(QfheRun {
        outputs,
        client: ClientState {
            input_bits: input_bits.to_vec(),
            z_keys,
            alpha,
            ledger,
            basis_choices: bases,
        },
        server: ServerView {
            nodes: g.nodes().iter().copied().collect(),
            edges: g.edges().iter().copied().collect(),
            angles,
            companions,
            raw,
            raw_outputs,
        },
        transcript,
    })
}
