use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::{GateKind, StateVector};

#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Gate { kind: GateKind, wires: Vec<usize> },
    Measure { wire: usize, bit: String },
}

impl Instruction {
    pub fn gate(kind: GateKind, wires: &[usize]) -> Self {
        Instruction::Gate {
            kind,
            wires: wires.to_vec(),
        }
    }

    pub fn wires(&self) -> &[usize] {
        match self {
            Instruction::Gate { wires, .. } => wires,
            Instruction::Measure { wire, .. } => std::slice::from_ref(wire),
        }
    }

    pub fn touches(&self, w: usize) -> bool {
        self.wires().contains(&w)
    }

    pub fn is_gate(&self, k: GateKind) -> bool {
        matches!(self, Instruction::Gate { kind, .. } if *kind == k)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Gate { kind, wires } => {
                write!(f, "gate {kind}")?;
                for w in wires {
                    write!(f, " {w}")?;
                }
                Ok(())
            }
            Instruction::Measure { wire, bit } => write!(f, "measure {wire} -> {bit}"),
        }
    }
}

/// An ordered instruction list over `num_wires` wires.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    num_wires: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(num_wires: usize) -> Self {
        Circuit {
            num_wires,
            instructions: Vec::new(),
        }
    }

    /// Checks every instruction against the wire count and bit-name uniqueness.
    pub fn from_instructions(num_wires: usize, instructions: Vec<Instruction>) -> Result<Self> {
        let mut c = Circuit::new(num_wires);
        for ins in instructions {
            c.push(ins)?;
        }
        Ok(c)
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn push(&mut self, ins: Instruction) -> Result<()> {
        match &ins {
            Instruction::Gate { kind, wires } => {
                if wires.len() != kind.arity() {
                    return Err(Error::Arity {
                        gate: kind.name(),
                        expected: kind.arity(),
                        got: wires.len(),
                    });
                }
                if wires.len() == 2 && wires[0] == wires[1] {
                    return Err(Error::DuplicateTarget(wires[0]));
                }
            }
            Instruction::Measure { bit, .. } => {
                if self.bit_names().any(|b| b == bit) {
                    return Err(Error::Circuit(format!(
                        "classical bit `{bit}` measured twice"
                    )));
                }
            }
        }
        if let Some(&w) = ins.wires().iter().find(|&&w| w >= self.num_wires) {
            return Err(Error::QubitIndex {
                index: w,
                num_qubits: self.num_wires,
            });
        }
        self.instructions.push(ins);
        Ok(())
    }

    /// Appends a gate; panics on malformed wires (internal construction only).
    pub(crate) fn add(&mut self, kind: GateKind, wires: &[usize]) {
        self.push(Instruction::gate(kind, wires))
            .expect("well-formed gate");
    }

    pub(crate) fn extend(&mut self, ins: impl IntoIterator<Item = Instruction>) {
        for i in ins {
            self.push(i).expect("well-formed instruction");
        }
    }

    pub fn measure(&mut self, wire: usize, bit: impl Into<String>) -> Result<()> {
        self.push(Instruction::Measure {
            wire,
            bit: bit.into(),
        })
    }

    /// Classical bit names in measurement order.
    pub fn bit_names(&self) -> impl Iterator<Item = &String> {
        self.instructions.iter().filter_map(|i| match i {
            Instruction::Measure { bit, .. } => Some(bit),
            _ => None,
        })
    }

    /// `(wire, bit name)` per measurement, in order.
    pub fn measurements(&self) -> Vec<(usize, &str)> {
        self.instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::Measure { wire, bit } => Some((*wire, bit.as_str())),
                _ => None,
            })
            .collect()
    }

    pub fn gate_count(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Gate { .. }))
            .count()
    }

    pub fn two_qubit_gates(&self) -> impl Iterator<Item = (GateKind, usize, usize)> + '_ {
        self.instructions.iter().filter_map(|i| match i {
            Instruction::Gate { kind, wires } if wires.len() == 2 => {
                Some((*kind, wires[0], wires[1]))
            }
            _ => None,
        })
    }

    /// True when no gate acts on a wire after it has been measured, and no wire
    /// is measured twice.
    pub fn has_terminal_measurements(&self) -> bool {
        let mut measured = BTreeSet::new();
        for ins in &self.instructions {
            match ins {
                Instruction::Measure { wire, .. } => {
                    if !measured.insert(*wire) {
                        return false;
                    }
                }
                Instruction::Gate { wires, .. } => {
                    if wires.iter().any(|w| measured.contains(w)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Applies every gate (measurements are skipped) to `state`.
    pub fn apply_gates(&self, state: &mut StateVector) -> Result<()> {
        for ins in &self.instructions {
            if let Instruction::Gate { kind, wires } = ins {
                state.apply(*kind, wires)?;
            }
        }
        Ok(())
    }

    /// Text form, starting with a `wires N` header.
    pub fn to_text(&self) -> String {
        let mut out = format!("wires {}\n", self.num_wires);
        for ins in &self.instructions {
            out.push_str(&ins.to_string());
            out.push('\n');
        }
        out
    }
}

/// Parses `gate NAME w0 [w1]` / `measure w -> bit` lines. A leading `wires N`
/// record fixes the width; otherwise it is one more than the largest wire used.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut declared = None;
    let mut instructions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        let Some((&kw, args)) = toks.split_first() else {
            continue;
        };
        let wire = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("`{t}` is not a wire index")))
        };
        match kw {
            "wires" => {
                if args.len() != 1 {
                    return Err(Error::parse(line, "`wires` takes one count"));
                }
                declared = Some(wire(args[0])?);
            }
            "gate" => {
                let (&name, ws) = args
                    .split_first()
                    .ok_or_else(|| Error::parse(line, "`gate` needs a name"))?;
                let kind: GateKind = name.parse().map_err(|m: String| Error::parse(line, m))?;
                let wires = ws.iter().map(|t| wire(t)).collect::<Result<Vec<_>>>()?;
                if wires.len() != kind.arity() {
                    return Err(Error::parse(
                        line,
                        format!("{name} takes {} wires, got {}", kind.arity(), wires.len()),
                    ));
                }
                instructions.push((line, Instruction::Gate { kind, wires }));
            }
            "measure" => {
                if args.len() != 3 || args[1] != "->" {
                    return Err(Error::parse(line, "expected `measure <wire> -> <bit>`"));
                }
                instructions.push((
                    line,
                    Instruction::Measure {
                        wire: wire(args[0])?,
                        bit: args[2].to_string(),
                    },
                ));
            }
            other => return Err(Error::parse(line, format!("unknown record `{other}`"))),
        }
    }
    let width = declared.unwrap_or_else(|| {
        instructions
            .iter()
            .flat_map(|(_, i)| i.wires().iter().copied())
            .max()
            .map_or(0, |m| m + 1)
    });
    let mut c = Circuit::new(width);
    for (line, ins) in instructions {
        c.push(ins).map_err(|e| Error::parse(line, e.to_string()))?;
    }
    Ok(c)
}

pub fn load_circuit(path: &Path) -> Result<Circuit> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_circuit(&text).map_err(|e| e.in_file(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;

    #[test]
    fn text_round_trip() {
        let mut c = Circuit::new(3);
        c.add(GateKind::H, &[0]);
        c.add(GateKind::Rz(Angle::Octant(7)), &[2]);
        c.add(GateKind::CNOT, &[0, 1]);
        c.measure(1, "o7").unwrap();
        let back = parse_circuit(&c.to_text()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_instructions() {
        let mut c = Circuit::new(2);
        assert!(c.push(Instruction::gate(GateKind::CNOT, &[0])).is_err());
        assert!(c.push(Instruction::gate(GateKind::H, &[2])).is_err());
        c.measure(0, "a").unwrap();
        assert!(c.measure(1, "a").is_err());
        assert!(matches!(
            parse_circuit("gate H 0\ngate FOO 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn terminal_measurement_check() {
        let mut c = Circuit::new(2);
        c.measure(0, "a").unwrap();
        c.add(GateKind::H, &[1]);
        assert!(c.has_terminal_measurements());
        c.add(GateKind::X, &[0]);
        assert!(!c.has_terminal_measurements());
    }
}
