//! Lowering a delegated run to one circuit with terminal measurements only.
//!
//! Every measurement is deferred: a node measured at `φ` becomes `Rz(−φ) H` on
//! its wire, after which the wire holds the raw outcome in the computational
//! basis. A companion whose basis depends on earlier outcomes is rotated by a
//! controlled-`S†` driven by those wires, and output corrections are folded in
//! with CNOTs (or left to classical parity post-processing).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::circuit::{Circuit, Instruction};
use super::coupling::{CouplingMap, Placement};
use super::rewrite::{cancel_hh, decompose_controlled_sdg_with, rewrite_cz_to_cnot};
use super::route::{route, Routed};
use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::mbqc::{check_inputs, input_key, MeasurementPattern, NodeId};
use crate::qfhe::{correct_node, Mutation, Parity};
use crate::sim::GateKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    /// The raw outcome wire of a graph node.
    Raw(NodeId),
    /// The companion wire of a π/4 node.
    Alpha(NodeId),
}

/// XOR of wire outcomes plus a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityExpr {
    pub sources: BTreeSet<Source>,
    pub constant: u8,
}

impl ParityExpr {
    pub fn source(s: Source) -> Self {
        ParityExpr {
            sources: BTreeSet::from([s]),
            constant: 0,
        }
    }
}

impl Parity for ParityExpr {
    fn constant(bit: u8) -> Self {
        ParityExpr {
            sources: BTreeSet::new(),
            constant: bit & 1,
        }
    }

    fn xor_assign(&mut self, other: &Self) {
        for s in &other.sources {
            if !self.sources.remove(s) {
                self.sources.insert(*s);
            }
        }
        self.constant ^= other.constant;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityStrategy {
    /// Corrections are XORed into each output wire with CNOTs; only outputs are
    /// measured.
    #[default]
    FanIn,
    /// Every wire is measured and corrections are recombined classically.
    ClassicalParity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompileOptions {
    pub strategy: ParityStrategy,
    /// Gate on the control of each controlled-`S†`; anything but `T†` is wrong
    /// and exists for mutation checks.
    pub control_phase: Option<GateKind>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            strategy: ParityStrategy::FanIn,
            control_phase: Some(GateKind::Tdg),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledCircuit {
    /// Logical circuit after CZ lowering and H cancellation, before routing.
    pub logical: Circuit,
    pub routed: Routed,
    /// Logical wire labels: `n<id>` for nodes, `c<id>` for companions.
    pub wire_labels: Vec<String>,
    /// Per logical output, positions in the measured bit string to XOR.
    pub masks: Vec<Vec<usize>>,
    pub controlled_sdg_count: usize,
}

/// Logical wires: graph nodes ascending, then companions by ascending π/4 node.
pub fn logical_wires(
    pattern: &MeasurementPattern,
) -> (BTreeMap<NodeId, usize>, BTreeMap<NodeId, usize>) {
    let nodes: BTreeMap<NodeId, usize> = pattern
        .graph()
        .nodes()
        .iter()
        .enumerate()
        .map(|(k, &n)| (n, k))
        .collect();
    let mut quarter = pattern.quarter_nodes();
    quarter.sort();
    let companions = quarter
        .into_iter()
        .enumerate()
        .map(|(k, n)| (n, nodes.len() + k))
        .collect();
    (nodes, companions)
}

/// Unrouted circuit, wire labels, per-output masks and the controlled-`S†` count.
pub type Lowered = (Circuit, Vec<String>, Vec<Vec<usize>>, usize);

/// Builds the unrouted circuit. Returned masks index the measurement order.
pub fn lower_qfhe(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    opts: CompileOptions,
) -> Result<Lowered> {
    check_inputs(pattern, input_bits)?;
    pattern.check_allowed_angles()?;
    let g = pattern.graph();
    let (nodes, companions) = logical_wires(pattern);
    let width = nodes.len() + companions.len();
    let wire = |s: &Source| match s {
        Source::Raw(n) => nodes[n],
        Source::Alpha(n) => companions[n],
    };

    // symbolic correction recursion
    let mut b: BTreeMap<NodeId, ParityExpr> = BTreeMap::new();
    let mut betas: BTreeMap<NodeId, ParityExpr> = BTreeMap::new();
    for &i in pattern.order() {
        let key = input_key(pattern, input_bits, i);
        let v = correct_node(
            pattern,
            &b,
            key,
            i,
            ParityExpr::source(Source::Raw(i)),
            Mutation::None,
            |x: &ParityExpr| {
                betas.insert(i, x.clone());
                Ok(ParityExpr::source(Source::Alpha(i)))
            },
        )?;
        b.insert(i, v);
    }
    let mut output_exprs = Vec::new();
    for &o in g.outputs() {
        let e = correct_node(
            pattern,
            &b,
            0,
            o,
            ParityExpr::source(Source::Raw(o)),
            Mutation::None,
            |_| Err(Error::Pattern("outputs have no companion".into())),
        )?;
        output_exprs.push(e);
    }

    let mut c = Circuit::new(width);
    for &w in nodes.values() {
        c.add(GateKind::H, &[w]);
    }
    for (n, &cw) in &companions {
        c.add(GateKind::CNOT, &[nodes[n], cw]);
        // the companion pair is (|01⟩+|10⟩)/√2, so a Y measurement sits at +π/2
        c.add(GateKind::X, &[cw]);
    }
    for (a, bb) in g.edges() {
        c.add(GateKind::CZ, &[nodes[a], nodes[bb]]);
    }
    for &i in pattern.order() {
        let phi = pattern.angle(i).expect("validated");
        if phi != Angle::ZERO {
            c.add(GateKind::Rz(-phi), &[nodes[&i]]);
        }
        c.add(GateKind::H, &[nodes[&i]]);
    }

    let mut csdg = 0;
    for &i in pattern.order() {
        let Some(beta) = betas.get(&i) else { continue };
        let target = companions[&i];
        let srcs: Vec<usize> = beta.sources.iter().map(wire).collect();
        match srcs.split_first() {
            None => {
                if beta.constant == 1 {
                    c.add(GateKind::Sdg, &[target]);
                }
            }
            Some((&ctrl, rest)) => {
                let fan: Vec<Instruction> = rest
                    .iter()
                    .map(|&s| Instruction::gate(GateKind::CNOT, &[s, ctrl]))
                    .chain((beta.constant == 1).then(|| Instruction::gate(GateKind::X, &[ctrl])))
                    .collect();
                c.extend(fan.iter().cloned());
                c.extend(decompose_controlled_sdg_with(
                    ctrl,
                    target,
                    opts.control_phase,
                ));
                csdg += 1;
                c.extend(fan.into_iter().rev());
            }
        }
        c.add(GateKind::H, &[target]);
    }

    let mut labels: Vec<String> = nodes.keys().map(|n| format!("n{n}")).collect();
    labels.extend(companions.keys().map(|n| format!("c{n}")));
    let masks = match opts.strategy {
        ParityStrategy::FanIn => {
            for (&o, e) in g.outputs().iter().zip(&output_exprs) {
                let ow = nodes[&o];
                for s in &e.sources {
                    if *s != Source::Raw(o) {
                        c.add(GateKind::CNOT, &[wire(s), ow]);
                    }
                }
                if e.constant == 1 {
                    c.add(GateKind::X, &[ow]);
                }
            }
            for &o in g.outputs() {
                c.measure(nodes[&o], format!("n{o}"))?;
            }
            (0..g.outputs().len()).map(|k| vec![k]).collect()
        }
        ParityStrategy::ClassicalParity => {
            for (&o, e) in g.outputs().iter().zip(&output_exprs) {
                if e.constant == 1 {
                    c.add(GateKind::X, &[nodes[&o]]);
                }
            }
            let mut order: Vec<usize> = g.outputs().iter().map(|o| nodes[o]).collect();
            let rest: Vec<usize> = (0..width).filter(|w| !order.contains(w)).collect();
            order.extend(rest);
            for &w in &order {
                c.measure(w, labels[w].clone())?;
            }
            output_exprs
                .iter()
                .map(|e| {
                    e.sources
                        .iter()
                        .map(|s| {
                            order
                                .iter()
                                .position(|&w| w == wire(s))
                                .expect("all measured")
                        })
                        .collect()
                })
                .collect()
        }
    };
    Ok((c, labels, masks, csdg))
}

/// Lowers, rewrites (`CZ → CNOT`, `HH` cancellation) and routes onto `coupling`.
pub fn compile_qfhe_to_circuit(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    placement: &Placement,
    coupling: &CouplingMap,
) -> Result<CompiledCircuit> {
    compile_qfhe_with(
        pattern,
        input_bits,
        placement,
        coupling,
        CompileOptions::default(),
    )
}

pub fn compile_qfhe_with(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    placement: &Placement,
    coupling: &CouplingMap,
    opts: CompileOptions,
) -> Result<CompiledCircuit> {
    let (raw, wire_labels, masks, controlled_sdg_count) = lower_qfhe(pattern, input_bits, opts)?;
    let logical = cancel_hh(&rewrite_cz_to_cnot(&raw));
    let mut routed = route(&logical, coupling, placement)?;
    routed.circuit = cancel_hh(&routed.circuit);
    Ok(CompiledCircuit {
        logical,
        routed,
        wire_labels,
        masks,
        controlled_sdg_count,
    })
}
