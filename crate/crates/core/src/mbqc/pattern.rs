use std::collections::BTreeMap;

use super::flow::{validate_flow, FlowMap};
use super::graph::{NodeId, OpenGraph};
use crate::angle::Angle;
use crate::error::{Error, Result};

/// Angles (in units of π/4) the deferred-correction rules can handle.
pub const ALLOWED_OCTANTS: [u8; 5] = [0, 1, 2, 4, 6];

/// How a measured node's classical correction is computed once the server has
/// measured at the default angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrectionCase {
    /// `φ ∈ {0, π}`: the X dependency is invisible.
    Pauli,
    /// `φ ∈ {π/2, 3π/2}`: the X dependency flips the outcome.
    HalfPi,
    /// `φ = π/4`: needs a Bell companion.
    QuarterPi,
}

impl CorrectionCase {
    pub fn of(angle: Angle) -> Option<CorrectionCase> {
        match angle.as_octant()? {
            0 | 4 => Some(CorrectionCase::Pauli),
            2 | 6 => Some(CorrectionCase::HalfPi),
            1 => Some(CorrectionCase::QuarterPi),
            _ => None,
        }
    }
}

/// An open graph with flow and one measurement angle per non-output node.
///
/// Any angle is representable so that patterns such as `J(π/4)` (which measures
/// at `7π/4`) can be simulated interactively. [`MeasurementPattern::check_allowed_angles`]
/// enforces the restricted set wherever deferred corrections are needed.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementPattern {
    graph: OpenGraph,
    flow: FlowMap,
    angles: BTreeMap<NodeId, Angle>,
}

impl MeasurementPattern {
    pub fn new(graph: OpenGraph, flow: FlowMap, angles: BTreeMap<NodeId, Angle>) -> Result<Self> {
        let violations = validate_flow(&graph, &flow)?;
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(Error::InvalidFlow(list.join("; ")));
        }
        for n in graph.non_outputs() {
            if !angles.contains_key(&n) {
                return Err(Error::Pattern(format!("node {n} has no measurement angle")));
            }
        }
        for &n in angles.keys() {
            if !graph.contains(n) {
                return Err(Error::Pattern(format!("angle given for unknown node {n}")));
            }
            if graph.is_output(n) {
                return Err(Error::Pattern(format!("output {n} cannot carry an angle")));
            }
        }
        Ok(MeasurementPattern {
            graph,
            flow,
            angles,
        })
    }

    /// Builds the flow's measurement order from `f` before validating.
    pub fn from_flow(
        graph: OpenGraph,
        f: BTreeMap<NodeId, NodeId>,
        angles: BTreeMap<NodeId, Angle>,
    ) -> Result<Self> {
        let flow = FlowMap::new(&graph, f)?;
        MeasurementPattern::new(graph, flow, angles)
    }

    pub fn graph(&self) -> &OpenGraph {
        &self.graph
    }

    pub fn flow(&self) -> &FlowMap {
        &self.flow
    }

    pub fn angles(&self) -> &BTreeMap<NodeId, Angle> {
        &self.angles
    }

    pub fn angle(&self, n: NodeId) -> Option<Angle> {
        self.angles.get(&n).copied()
    }

    /// Non-output nodes in measurement order.
    pub fn order(&self) -> &[NodeId] {
        self.flow.order()
    }

    /// π/4 nodes in measurement order; each needs a Bell companion.
    pub fn quarter_nodes(&self) -> Vec<NodeId> {
        self.order()
            .iter()
            .copied()
            .filter(|&n| self.angle(n) == Some(Angle::QUARTER_PI))
            .collect()
    }

    pub fn check_allowed_angles(&self) -> Result<()> {
        for (&n, &a) in &self.angles {
            if !a.as_octant().is_some_and(|k| ALLOWED_OCTANTS.contains(&k)) {
                return Err(Error::Pattern(format!(
                    "angle {a} on node {n} is outside {{0, pi/4, pi/2, pi, 3pi/2}}"
                )));
            }
        }
        Ok(())
    }

    pub fn correction_case(&self, n: NodeId) -> Option<CorrectionCase> {
        CorrectionCase::of(self.angle(n)?)
    }
}

/// The two-node pattern realising `J(α) = H·P(α)`: CZ on `1–2`, measure node 1
/// at `−α`, X-correct node 2 on `s_1`.
pub fn j_alpha_pattern(alpha: Angle) -> MeasurementPattern {
    let (a, b) = (NodeId(1), NodeId(2));
    let graph = OpenGraph::new([a, b], [(a, b)], vec![a], vec![b]).expect("static graph");
    MeasurementPattern::from_flow(
        graph,
        BTreeMap::from([(a, b)]),
        BTreeMap::from([(a, -alpha)]),
    )
    .expect("static pattern")
}

/// Assignment of pattern nodes (and optionally Bell companions) to simulator qubits.
///
/// Inputs come first in input order, then remaining nodes ascending, then the
/// companions in ascending order of their π/4 node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitLayout {
    nodes: BTreeMap<NodeId, usize>,
    companions: BTreeMap<NodeId, usize>,
    num_qubits: usize,
}

impl QubitLayout {
    pub fn new(pattern: &MeasurementPattern, with_companions: bool) -> Self {
        let g = pattern.graph();
        let mut nodes = BTreeMap::new();
        let mut next = 0;
        for &i in g.inputs() {
            nodes.insert(i, next);
            next += 1;
        }
        for &n in g.nodes() {
            if !g.is_input(n) {
                nodes.insert(n, next);
                next += 1;
            }
        }
        let mut companions = BTreeMap::new();
        if with_companions {
            let mut quarter = pattern.quarter_nodes();
            quarter.sort();
            for n in quarter {
                companions.insert(n, next);
                next += 1;
            }
        }
        QubitLayout {
            nodes,
            companions,
            num_qubits: next,
        }
    }

    pub fn qubit(&self, n: NodeId) -> usize {
        self.nodes[&n]
    }

    pub fn companion(&self, n: NodeId) -> Option<usize> {
        self.companions.get(&n).copied()
    }

    pub fn companions(&self) -> &BTreeMap<NodeId, usize> {
        &self.companions
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }
}
