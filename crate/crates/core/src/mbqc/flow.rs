use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use super::graph::{NodeId, OpenGraph};
use crate::error::{Error, Result};

/// A flow function `f: O^c → I^c` together with a total measurement order over `O^c`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowMap {
    f: BTreeMap<NodeId, NodeId>,
    order: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowViolation {
    /// `f` is undefined on a non-output node.
    Undefined(NodeId),
    /// `f` is defined on an output node.
    DefinedOnOutput(NodeId),
    /// `f(x)` is an input.
    TargetIsInput { x: NodeId, fx: NodeId },
    /// Two nodes share the same flow successor.
    NotInjective { fx: NodeId },
    /// `x` and `f(x)` are not neighbours.
    NotNeighbour { x: NodeId, fx: NodeId },
    /// `f(x)` is measured no later than `x`.
    SuccessorNotLater { x: NodeId, fx: NodeId },
    /// A neighbour `y` of `f(x)` is measured before `x`.
    NeighbourNotLater { x: NodeId, y: NodeId },
    /// The order does not list every non-output exactly once.
    OrderMismatch,
}

impl fmt::Display for FlowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowViolation::Undefined(x) => write!(f, "f({x}) undefined"),
            FlowViolation::DefinedOnOutput(x) => write!(f, "f defined on output {x}"),
            FlowViolation::TargetIsInput { x, fx } => write!(f, "f({x}) = {fx} is an input"),
            FlowViolation::NotInjective { fx } => write!(f, "{fx} is the flow of two nodes"),
            FlowViolation::NotNeighbour { x, fx } => {
                write!(f, "{x} and f({x}) = {fx} not adjacent")
            }
            FlowViolation::SuccessorNotLater { x, fx } => {
                write!(f, "f({x}) = {fx} is not after {x}")
            }
            FlowViolation::NeighbourNotLater { x, y } => {
                write!(f, "{y} neighbours f({x}) but is measured before {x}")
            }
            FlowViolation::OrderMismatch => write!(f, "order is not a permutation of O^c"),
        }
    }
}

impl FlowMap {
    /// Uses `order` verbatim; call [`validate_flow`] to check it.
    pub fn with_order(f: BTreeMap<NodeId, NodeId>, order: Vec<NodeId>) -> Self {
        FlowMap { f, order }
    }

    /// Derives the measurement order as the topological order of the partial order
    /// induced by `f`, ties broken by ascending node id.
    pub fn new(graph: &OpenGraph, f: BTreeMap<NodeId, NodeId>) -> Result<Self> {
        for (&x, &fx) in &f {
            if !graph.contains(x) {
                return Err(Error::InvalidFlow(format!("flow source {x} is not a node")));
            }
            if !graph.contains(fx) {
                return Err(Error::FlowTarget { from: x, to: fx });
            }
        }
        let measured: BTreeSet<NodeId> = graph.non_outputs().collect();
        let mut succ: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        let mut indeg: BTreeMap<NodeId, usize> = measured.iter().map(|&n| (n, 0)).collect();
        let mut add = |a: NodeId, b: NodeId| {
            if a != b
                && measured.contains(&a)
                && measured.contains(&b)
                && succ.entry(a).or_default().insert(b)
            {
                *indeg.get_mut(&b).unwrap() += 1;
            }
        };
        for (&x, &fx) in &f {
            add(x, fx);
            for y in graph.neighbours(fx) {
                if y != x {
                    add(x, y);
                }
            }
        }
        let mut ready: BinaryHeap<Reverse<NodeId>> = indeg
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&n, _)| Reverse(n))
            .collect();
        let mut order = Vec::with_capacity(measured.len());
        while let Some(Reverse(n)) = ready.pop() {
            order.push(n);
            for &m in succ.get(&n).into_iter().flatten() {
                let d = indeg.get_mut(&m).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push(Reverse(m));
                }
            }
        }
        if order.len() != measured.len() {
            return Err(Error::InvalidFlow(
                "flow constraints contain a cycle".to_string(),
            ));
        }
        Ok(FlowMap { f, order })
    }

    pub fn successor(&self, x: NodeId) -> Option<NodeId> {
        self.f.get(&x).copied()
    }

    /// `f⁻¹(i)`.
    pub fn predecessor(&self, i: NodeId) -> Option<NodeId> {
        self.f.iter().find(|(_, &fx)| fx == i).map(|(&x, _)| x)
    }

    pub fn map(&self) -> &BTreeMap<NodeId, NodeId> {
        &self.f
    }

    /// Measurement order over the non-output nodes.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }
}

/// Checks the three flow conditions (plus totality, injectivity and `f(x) ∉ I`)
/// against the flow's explicit measurement order. Outputs count as measured last.
///
/// A flow that points at a node outside the graph is a structural error rather
/// than a violation.
pub fn validate_flow(graph: &OpenGraph, flow: &FlowMap) -> Result<Vec<FlowViolation>> {
    for (&x, &fx) in &flow.f {
        if !graph.contains(fx) {
            return Err(Error::FlowTarget { from: x, to: fx });
        }
        if !graph.contains(x) {
            return Err(Error::InvalidFlow(format!("flow source {x} is not a node")));
        }
    }
    let mut violations = Vec::new();
    let measured: BTreeSet<NodeId> = graph.non_outputs().collect();
    let listed: BTreeSet<NodeId> = flow.order.iter().copied().collect();
    if listed != measured || listed.len() != flow.order.len() {
        violations.push(FlowViolation::OrderMismatch);
    }
    let position = |n: NodeId| -> usize {
        if graph.is_output(n) {
            usize::MAX
        } else {
            flow.order
                .iter()
                .position(|&m| m == n)
                .unwrap_or(usize::MAX)
        }
    };
    let mut targets = BTreeSet::new();
    for x in graph.nodes().iter().copied() {
        let fx = match (graph.is_output(x), flow.successor(x)) {
            (true, Some(_)) => {
                violations.push(FlowViolation::DefinedOnOutput(x));
                continue;
            }
            (true, None) => continue,
            (false, None) => {
                violations.push(FlowViolation::Undefined(x));
                continue;
            }
            (false, Some(fx)) => fx,
        };
        if !targets.insert(fx) {
            violations.push(FlowViolation::NotInjective { fx });
        }
        if graph.is_input(fx) {
            violations.push(FlowViolation::TargetIsInput { x, fx });
        }
        if !graph.are_adjacent(x, fx) {
            violations.push(FlowViolation::NotNeighbour { x, fx });
        }
        let px = position(x);
        if position(fx) <= px {
            violations.push(FlowViolation::SuccessorNotLater { x, fx });
        }
        for y in graph.neighbours(fx) {
            if y != x && position(y) <= px {
                violations.push(FlowViolation::NeighbourNotLater { x, y });
            }
        }
    }
    Ok(violations)
}

/// `Z^i = { j ≠ i : i ∈ N_G(f(j)) }`.
pub fn z_dependency_set(graph: &OpenGraph, flow: &FlowMap, i: NodeId) -> BTreeSet<NodeId> {
    flow.f
        .iter()
        .filter(|(&j, &fj)| j != i && graph.are_adjacent(fj, i))
        .map(|(&j, _)| j)
        .collect()
}
