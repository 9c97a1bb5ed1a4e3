use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::flow::{validate_flow, FlowMap};
use super::graph::{NodeId, OpenGraph};
use super::pattern::{MeasurementPattern, ALLOWED_OCTANTS};
use crate::angle::Angle;

/// Draws a pattern made of 1–3 flow chains (one per input) with at most
/// `max_measured` measured nodes, then adds random cross edges that keep the
/// flow valid. Angles come from the allowed set.
pub fn random_pattern<R: Rng + ?Sized>(rng: &mut R, max_measured: usize) -> MeasurementPattern {
    assert!(max_measured >= 1);
    let chains = rng.random_range(1..=max_measured.min(3));
    // every chain measures at least one node
    let mut lengths = vec![1usize; chains];
    for _ in 0..rng.random_range(0..=max_measured - chains) {
        let c = rng.random_range(0..chains);
        lengths[c] += 1;
    }

    let mut next = 1u32;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut f = BTreeMap::new();
    for &len in &lengths {
        let chain: Vec<NodeId> = (0..=len).map(|k| NodeId(next + k as u32)).collect();
        next += len as u32 + 1;
        inputs.push(chain[0]);
        outputs.push(*chain.last().unwrap());
        for w in chain.windows(2) {
            edges.push((w[0], w[1]));
            f.insert(w[0], w[1]);
        }
        nodes.extend(chain);
    }

    let mut attempts = rng.random_range(0..=nodes.len());
    while attempts > 0 {
        attempts -= 1;
        let a = *nodes.choose(rng).unwrap();
        let b = *nodes.choose(rng).unwrap();
        if a == b || edges.contains(&(a, b)) || edges.contains(&(b, a)) {
            continue;
        }
        edges.push((a, b));
        let ok = OpenGraph::new(
            nodes.clone(),
            edges.clone(),
            inputs.clone(),
            outputs.clone(),
        )
        .ok()
        .and_then(|g| {
            let flow = FlowMap::new(&g, f.clone()).ok()?;
            validate_flow(&g, &flow).ok()?.is_empty().then_some(())
        })
        .is_some();
        if !ok {
            edges.pop();
        }
    }

    let graph = OpenGraph::new(nodes, edges, inputs, outputs).expect("chains are well formed");
    let angles = f
        .keys()
        .map(|&n| (n, Angle::Octant(*ALLOWED_OCTANTS.choose(rng).unwrap())))
        .collect();
    MeasurementPattern::from_flow(graph, f, angles).expect("flow kept valid")
}
