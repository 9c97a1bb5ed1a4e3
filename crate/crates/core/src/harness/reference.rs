use std::collections::BTreeMap;

use crate::angle::Angle;
use crate::mbqc::{MeasurementPattern, NodeId, OpenGraph};

/// The built-in 3×3 pattern: three rows of three nodes with flow along each row.
///
/// ```text
///  1 ── 4 ── 7
///  │    │
///  │    │          (1–3 and 4–6 are direct edges)
///  2 ── 5 ── 8
///
///  3 ── 6 ── 9
/// ```
///
/// Inputs `1 2 3`, outputs `9 8 7`, angles `0, π/2, 0` on the first column and
/// `π/4, π/2, π/4` on the second. Nodes 4 and 6 need Bell companions, so the
/// delegated run simulates 11 qubits.
pub fn reference_pattern() -> MeasurementPattern {
    let n = NodeId;
    let graph = OpenGraph::new(
        (1..=9).map(n),
        [
            (1, 4),
            (4, 7),
            (2, 5),
            (5, 8),
            (3, 6),
            (6, 9),
            (1, 3),
            (4, 6),
        ]
        .map(|(a, b)| (n(a), n(b))),
        vec![n(1), n(2), n(3)],
        vec![n(9), n(8), n(7)],
    )
    .expect("static graph");
    let flow = (1..=6).map(|k| (n(k), n(k + 3))).collect();
    let angles: BTreeMap<NodeId, Angle> = [(1, 0), (2, 2), (3, 0), (4, 1), (5, 2), (6, 1)]
        .into_iter()
        .map(|(k, a)| (n(k), Angle::Octant(a)))
        .collect();
    MeasurementPattern::from_flow(graph, flow, angles).expect("static pattern")
}

/// Input integer `k` as bits over the ordered input list, most significant first.
pub fn input_bits(k: u64, width: usize) -> Vec<u8> {
    (0..width)
        .map(|j| (k >> (width - 1 - j) & 1) as u8)
        .collect()
}
