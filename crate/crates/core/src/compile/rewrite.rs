//! Identity-based rewrites. Each one preserves the circuit unitary exactly.

use super::circuit::{Circuit, Instruction};
use crate::sim::GateKind;

fn g(kind: GateKind, wires: &[usize]) -> Instruction {
    Instruction::gate(kind, wires)
}

/// `CZ(a,b) → H(b) CNOT(a,b) H(b)`.
pub fn rewrite_cz_to_cnot(circuit: &Circuit) -> Circuit {
    let mut out = Circuit::new(circuit.num_wires());
    for ins in circuit.instructions() {
        match ins {
            Instruction::Gate {
                kind: GateKind::CZ,
                wires,
            } => out.extend(cz_as_cnot(wires[0], wires[1])),
            other => out.extend([other.clone()]),
        }
    }
    out
}

pub fn cz_as_cnot(a: usize, b: usize) -> Vec<Instruction> {
    vec![
        g(GateKind::H, &[b]),
        g(GateKind::CNOT, &[a, b]),
        g(GateKind::H, &[b]),
    ]
}

/// Removes pairs of H on one wire with nothing else touching that wire in
/// between, until none are left.
pub fn cancel_hh(circuit: &Circuit) -> Circuit {
    let mut ins: Vec<Option<Instruction>> =
        circuit.instructions().iter().cloned().map(Some).collect();
    loop {
        let mut changed = false;
        // last live instruction seen on each wire
        let mut last: Vec<Option<usize>> = vec![None; circuit.num_wires()];
        for i in 0..ins.len() {
            let Some(cur) = &ins[i] else { continue };
            let wires = cur.wires().to_vec();
            if cur.is_gate(GateKind::H) {
                let w = wires[0];
                if let Some(j) = last[w] {
                    if ins[j].as_ref().is_some_and(|p| p.is_gate(GateKind::H)) {
                        ins[i] = None;
                        ins[j] = None;
                        last[w] = None;
                        changed = true;
                        continue;
                    }
                }
            }
            for w in wires {
                last[w] = Some(i);
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = Circuit::new(circuit.num_wires());
    out.extend(ins.into_iter().flatten());
    out
}

/// `CNOT(b→a)` using only the `a→b` direction:
/// `H(a) H(b) CNOT(a,b) H(b) H(a)`.
pub fn reverse_cnot(a: usize, b: usize) -> Vec<Instruction> {
    vec![
        g(GateKind::H, &[a]),
        g(GateKind::H, &[b]),
        g(GateKind::CNOT, &[a, b]),
        g(GateKind::H, &[b]),
        g(GateKind::H, &[a]),
    ]
}

/// SWAP from a single direction `a→b`: `CNOT(a,b) · CNOT(b,a) · CNOT(a,b)` with
/// the middle CNOT written as `H(a) CZ(a,b) H(a)`. With `lower_cz` the CZ is
/// expanded too, leaving only `CNOT(a,b)` and H.
pub fn decompose_swap_onedir(a: usize, b: usize, lower_cz: bool) -> Vec<Instruction> {
    let mut out = vec![g(GateKind::CNOT, &[a, b]), g(GateKind::H, &[a])];
    if lower_cz {
        out.extend(cz_as_cnot(a, b));
    } else {
        out.push(g(GateKind::CZ, &[a, b]));
    }
    out.push(g(GateKind::H, &[a]));
    out.push(g(GateKind::CNOT, &[a, b]));
    out
}

/// Controlled-`S†` from T gates and two CNOTs, in time order:
/// `T†(t) CNOT(c,t) T(t) CNOT(c,t)` then `control_phase` on `c`.
///
/// With the control in `|1⟩` the target sees `X T X T† = e^{iπ/4} S†`; the
/// control-side `T†` removes that phase, so the result is exactly
/// `diag(1, 1, 1, −i)`. Passing another gate (or none) is only useful for
/// checking that the matrix oracle notices.
pub fn decompose_controlled_sdg_with(
    control: usize,
    target: usize,
    control_phase: Option<GateKind>,
) -> Vec<Instruction> {
    let mut out = vec![
        g(GateKind::Tdg, &[target]),
        g(GateKind::CNOT, &[control, target]),
        g(GateKind::T, &[target]),
        g(GateKind::CNOT, &[control, target]),
    ];
    if let Some(p) = control_phase {
        out.push(g(p, &[control]));
    }
    out
}

pub fn decompose_controlled_sdg(control: usize, target: usize) -> Vec<Instruction> {
    decompose_controlled_sdg_with(control, target, Some(GateKind::Tdg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit(n: usize, ins: Vec<Instruction>) -> Circuit {
        Circuit::from_instructions(n, ins).unwrap()
    }

    #[test]
    fn cancel_hh_examples() {
        let c = circuit(2, vec![g(GateKind::H, &[0]), g(GateKind::H, &[0])]);
        assert!(cancel_hh(&c).is_empty());

        let c = circuit(
            2,
            vec![
                g(GateKind::H, &[0]),
                g(GateKind::X, &[1]),
                g(GateKind::H, &[0]),
            ],
        );
        assert_eq!(cancel_hh(&c).instructions(), &[g(GateKind::X, &[1])]);

        let c = circuit(
            2,
            vec![
                g(GateKind::H, &[0]),
                g(GateKind::X, &[0]),
                g(GateKind::H, &[0]),
            ],
        );
        assert_eq!(cancel_hh(&c), c);

        // nested pairs collapse in one call
        let c = circuit(
            1,
            vec![
                g(GateKind::H, &[0]),
                g(GateKind::H, &[0]),
                g(GateKind::H, &[0]),
                g(GateKind::H, &[0]),
                g(GateKind::H, &[0]),
            ],
        );
        assert_eq!(cancel_hh(&c).len(), 1);
    }

    #[test]
    fn reversing_twice_cancels_back() {
        let mut twice = Vec::new();
        for ins in reverse_cnot(0, 1) {
            match ins {
                Instruction::Gate {
                    kind: GateKind::CNOT,
                    ..
                } => twice.extend(reverse_cnot(0, 1)),
                other => twice.push(other),
            }
        }
        let c = cancel_hh(&circuit(2, twice));
        assert_eq!(c.instructions(), &[g(GateKind::CNOT, &[0, 1])]);
    }

    #[test]
    fn lowered_swap_uses_one_direction() {
        for ins in decompose_swap_onedir(3, 1, true) {
            match ins {
                Instruction::Gate {
                    kind: GateKind::CNOT,
                    wires,
                } => assert_eq!(wires, vec![3, 1]),
                Instruction::Gate {
                    kind: GateKind::H, ..
                } => {}
                other => panic!("unexpected {other}"),
            }
        }
    }
}
