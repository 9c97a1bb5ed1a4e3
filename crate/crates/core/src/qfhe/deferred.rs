use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mbqc::{CorrectionCase, MeasurementPattern, NodeId};

/// A value that can be XOR-combined: a concrete bit, or a symbolic parity
/// expression when the recursion is evaluated at compile time.
pub trait Parity: Clone {
    fn constant(bit: u8) -> Self;
    fn xor_assign(&mut self, other: &Self);
}

impl Parity for u8 {
    fn constant(bit: u8) -> Self {
        bit & 1
    }

    fn xor_assign(&mut self, other: &Self) {
        *self ^= other;
    }
}

/// Deliberate corruptions of the correction rules, used to check that the
/// oracle suite notices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Forget the `b_{f⁻¹(i)}` term for `φ ∈ {π/2, 3π/2}`.
    DropHalfPiXTerm,
}

/// One step of the correction recursion for node `i`.
///
/// `b` must already hold every node `i` depends on. `alpha` is asked for the
/// companion outcome of a π/4 node and receives that node's X dependency, which
/// decides the companion's basis. For outputs the result is the computational
/// readout correction `s_o ⊕ b_{f⁻¹(o)}`.
pub(crate) fn correct_node<P: Parity>(
    pattern: &MeasurementPattern,
    b: &BTreeMap<NodeId, P>,
    key: u8,
    i: NodeId,
    s_i: P,
    mutation: Mutation,
    alpha: impl FnOnce(&P) -> Result<P>,
) -> Result<P> {
    let lookup = |j: NodeId| b.get(&j).cloned().ok_or(Error::MissingOutcome(j));
    let x = match pattern.flow().predecessor(i) {
        Some(p) => lookup(p)?,
        None => P::constant(0),
    };
    let mut out = s_i;
    if pattern.graph().is_output(i) {
        out.xor_assign(&x);
        return Ok(out);
    }
    let mut z = P::constant(key);
    for j in crate::mbqc::z_dependency_set(pattern.graph(), pattern.flow(), i) {
        z.xor_assign(&lookup(j)?);
    }
    match pattern.correction_case(i) {
        Some(CorrectionCase::Pauli) => {}
        Some(CorrectionCase::HalfPi) => {
            if mutation != Mutation::DropHalfPiXTerm {
                out.xor_assign(&x);
            }
        }
        Some(CorrectionCase::QuarterPi) => out.xor_assign(&alpha(&x)?),
        None => {
            return Err(Error::Pattern(format!(
                "node {i} angle {} has no deferred correction rule",
                pattern.angle(i).expect("non-output")
            )))
        }
    }
    out.xor_assign(&z);
    Ok(out)
}

/// Corrected outcomes from raw server outcomes `s`, companion outcomes `alpha`
/// and input bits (used as Z keys), in evaluation order: measured nodes in flow
/// order, then any output whose raw readout is present in `s`.
pub fn deferred_corrections(
    pattern: &MeasurementPattern,
    s: &BTreeMap<NodeId, u8>,
    alpha: &BTreeMap<NodeId, u8>,
    input_bits: &[u8],
) -> Result<Vec<(NodeId, u8)>> {
    deferred_corrections_with(pattern, s, alpha, input_bits, Mutation::None)
}

pub fn deferred_corrections_with(
    pattern: &MeasurementPattern,
    s: &BTreeMap<NodeId, u8>,
    alpha: &BTreeMap<NodeId, u8>,
    input_bits: &[u8],
    mutation: Mutation,
) -> Result<Vec<(NodeId, u8)>> {
    crate::mbqc::check_inputs(pattern, input_bits)?;
    pattern.check_allowed_angles()?;
    let mut b = BTreeMap::new();
    let mut order = Vec::new();
    let outputs = pattern
        .graph()
        .outputs()
        .iter()
        .filter(|o| s.contains_key(o));
    for &i in pattern.order().iter().chain(outputs) {
        let s_i = *s.get(&i).ok_or(Error::MissingOutcome(i))?;
        let key = crate::mbqc::input_key(pattern, input_bits, i);
        let v = correct_node(pattern, &b, key, i, s_i, mutation, |_| {
            alpha.get(&i).copied().ok_or(Error::MissingAlpha(i))
        })?;
        b.insert(i, v);
        order.push((i, v));
    }
    Ok(order)
}
