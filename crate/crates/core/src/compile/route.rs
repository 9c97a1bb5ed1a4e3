use super::circuit::{Circuit, Instruction};
use super::coupling::{CouplingMap, Placement};
use super::rewrite::{decompose_swap_onedir, reverse_cnot};
use crate::error::{Error, Result};
use crate::sim::GateKind;

/// A circuit on physical nodes plus where each logical wire started and ended.
#[derive(Clone, Debug, PartialEq)]
pub struct Routed {
    pub circuit: Circuit,
    pub initial: Placement,
    pub final_placement: Placement,
    pub swaps: usize,
}

/// Maps `circuit` onto `coupling`. Two-qubit gates between distant nodes first
/// move the first operand along a shortest path with one-direction SWAPs;
/// CNOTs against the allowed direction are flipped with H conjugation. Logical
/// SWAP gates become relabellings.
pub fn route(circuit: &Circuit, coupling: &CouplingMap, placement: &Placement) -> Result<Routed> {
    if placement.len() != circuit.num_wires() {
        return Err(Error::Placement(format!(
            "placement covers {} wires, circuit has {}",
            placement.len(),
            circuit.num_wires()
        )));
    }
    if placement
        .as_slice()
        .iter()
        .any(|&p| p >= coupling.num_nodes())
    {
        return Err(Error::Placement(
            "placement exceeds the coupling map".into(),
        ));
    }
    if !coupling.is_connected() {
        return Err(Error::Unroutable);
    }
    let mut pos: Vec<usize> = placement.as_slice().to_vec();
    let mut owner: Vec<Option<usize>> = vec![None; coupling.num_nodes()];
    for (l, &p) in pos.iter().enumerate() {
        owner[p] = Some(l);
    }
    let mut out = Circuit::new(coupling.num_nodes());
    let mut swaps = 0;

    for ins in circuit.instructions() {
        match ins {
            Instruction::Measure { wire, bit } => out.measure(pos[*wire], bit.clone())?,
            Instruction::Gate { kind, wires } if wires.len() == 1 => {
                out.add(*kind, &[pos[wires[0]]]);
            }
            Instruction::Gate {
                kind: GateKind::SWAP,
                wires,
            } => {
                let (a, b) = (wires[0], wires[1]);
                pos.swap(a, b);
                owner[pos[a]] = Some(a);
                owner[pos[b]] = Some(b);
            }
            Instruction::Gate { kind, wires } => {
                let (la, lb) = (wires[0], wires[1]);
                if !coupling.linked(pos[la], pos[lb]) {
                    let path = coupling
                        .shortest_path(pos[la], pos[lb])
                        .ok_or(Error::Unroutable)?;
                    // walk la forward until it sits next to lb
                    for step in 1..path.len() - 1 {
                        let (from, to) = (path[step - 1], path[step]);
                        let (c, t) = if coupling.allows(from, to) {
                            (from, to)
                        } else {
                            (to, from)
                        };
                        out.extend(decompose_swap_onedir(c, t, true));
                        swaps += 1;
                        let moved = owner[to];
                        owner[to] = Some(la);
                        owner[from] = moved;
                        pos[la] = to;
                        if let Some(m) = moved {
                            pos[m] = from;
                        }
                    }
                }
                let (pa, pb) = (pos[la], pos[lb]);
                match kind {
                    GateKind::CNOT if coupling.allows(pa, pb) => out.add(GateKind::CNOT, &[pa, pb]),
                    GateKind::CNOT => out.extend(reverse_cnot(pb, pa)),
                    GateKind::CZ if coupling.allows(pa, pb) => out.add(GateKind::CZ, &[pa, pb]),
                    GateKind::CZ => out.add(GateKind::CZ, &[pb, pa]),
                    other => {
                        return Err(Error::Circuit(format!(
                            "cannot route two-qubit gate {other}"
                        )))
                    }
                }
            }
        }
    }
    for (_, a, b) in out.two_qubit_gates() {
        debug_assert!(coupling.allows(a, b));
    }
    Ok(Routed {
        circuit: out,
        initial: placement.clone(),
        final_placement: Placement::new(pos, coupling.num_nodes())?,
        swaps,
    })
}

/// Every two-qubit instruction acts on an allowed `(control, target)` pair.
pub fn respects_coupling(circuit: &Circuit, coupling: &CouplingMap) -> bool {
    circuit
        .two_qubit_gates()
        .all(|(_, a, b)| coupling.allows(a, b))
}
