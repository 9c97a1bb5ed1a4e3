use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An open graph `(G, I, O)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenGraph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeSet<(NodeId, NodeId)>,
    inputs: Vec<NodeId>,
    outputs: Vec<NodeId>,
    adjacency: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl OpenGraph {
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        inputs: Vec<NodeId>,
        outputs: Vec<NodeId>,
    ) -> Result<Self> {
        let nodes: BTreeSet<NodeId> = nodes.into_iter().collect();
        let mut adjacency: BTreeMap<NodeId, BTreeSet<NodeId>> =
            nodes.iter().map(|&n| (n, BTreeSet::new())).collect();
        let mut normalised = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Graph(format!("self-loop on node {a}")));
            }
            for n in [a, b] {
                if !nodes.contains(&n) {
                    return Err(Error::Graph(format!("edge endpoint {n} is not a node")));
                }
            }
            normalised.insert((a.min(b), a.max(b)));
            adjacency.get_mut(&a).unwrap().insert(b);
            adjacency.get_mut(&b).unwrap().insert(a);
        }
        for (label, list) in [("input", &inputs), ("output", &outputs)] {
            let mut seen = BTreeSet::new();
            for n in list {
                if !nodes.contains(n) {
                    return Err(Error::Graph(format!("{label} {n} is not a node")));
                }
                if !seen.insert(*n) {
                    return Err(Error::Graph(format!("{label} {n} listed twice")));
                }
            }
        }
        Ok(OpenGraph {
            nodes,
            edges: normalised,
            inputs,
            outputs,
            adjacency,
        })
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    /// Edges as `(smaller id, larger id)`.
    pub fn edges(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.edges
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.nodes.contains(&n)
    }

    pub fn is_input(&self, n: NodeId) -> bool {
        self.inputs.contains(&n)
    }

    pub fn is_output(&self, n: NodeId) -> bool {
        self.outputs.contains(&n)
    }

    pub fn input_position(&self, n: NodeId) -> Option<usize> {
        self.inputs.iter().position(|&i| i == n)
    }

    pub fn neighbours(&self, n: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency.get(&n).into_iter().flatten().copied()
    }

    pub fn are_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// Non-output nodes, ascending.
    pub fn non_outputs(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().copied().filter(|n| !self.is_output(*n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    #[test]
    fn rejects_malformed_graphs() {
        let self_loop = OpenGraph::new(ids(&[1, 2]), [(NodeId(1), NodeId(1))], vec![], vec![]);
        assert!(matches!(self_loop, Err(Error::Graph(_))));
        let dangling = OpenGraph::new(ids(&[1]), [(NodeId(1), NodeId(2))], vec![], vec![]);
        assert!(matches!(dangling, Err(Error::Graph(_))));
        let bad_output = OpenGraph::new(ids(&[1]), [], vec![], ids(&[3]));
        assert!(matches!(bad_output, Err(Error::Graph(_))));
    }

    #[test]
    fn neighbourhoods_are_symmetric() {
        let g = OpenGraph::new(
            ids(&[1, 2, 3]),
            [(NodeId(2), NodeId(1)), (NodeId(2), NodeId(3))],
            ids(&[1]),
            ids(&[3]),
        )
        .unwrap();
        assert_eq!(g.neighbours(NodeId(2)).collect::<Vec<_>>(), ids(&[1, 3]));
        assert!(g.are_adjacent(NodeId(1), NodeId(2)));
        assert!(!g.are_adjacent(NodeId(1), NodeId(3)));
        assert!(g.edges().contains(&(NodeId(1), NodeId(2))));
        assert_eq!(g.non_outputs().collect::<Vec<_>>(), ids(&[1, 2]));
    }
}
