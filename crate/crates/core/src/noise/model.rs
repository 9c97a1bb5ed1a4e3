use std::path::Path;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sim::{GateKind, StateVector};

/// Per-gate-class Pauli error rates and a readout flip rate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseModel {
    /// Depolarizing probability after each single-qubit gate.
    pub p1: f64,
    /// Depolarizing probability after each two-qubit gate.
    pub p2: f64,
    /// Readout flip probability.
    pub p_ro: f64,
    /// Per-layer dephasing probability on wires the layer leaves idle.
    pub p_idle: f64,
}

impl NoiseModel {
    pub const DEFAULT_P1: f64 = 1e-3;
    pub const DEFAULT_P2: f64 = 1e-2;
    pub const DEFAULT_P_RO: f64 = 1e-2;
    pub const DEFAULT_P_IDLE: f64 = 0.38;

    pub fn new(p1: f64, p2: f64, p_ro: f64, p_idle: f64) -> Result<Self> {
        for (name, value) in [("p1", p1), ("p2", p2), ("p_ro", p_ro), ("p_idle", p_idle)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Probability {
                    name: name.into(),
                    value,
                });
            }
        }
        Ok(NoiseModel {
            p1,
            p2,
            p_ro,
            p_idle,
        })
    }

    pub fn zero() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            p_ro: 0.0,
            p_idle: 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == NoiseModel::zero()
    }

    pub fn gate_error(&self, arity: usize) -> f64 {
        if arity == 2 {
            self.p2
        } else {
            self.p1
        }
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            p1: Self::DEFAULT_P1,
            p2: Self::DEFAULT_P2,
            p_ro: Self::DEFAULT_P_RO,
            p_idle: Self::DEFAULT_P_IDLE,
        }
    }
}

/// `key value` lines for `p1`, `p2`, `p_ro`, `p_idle`; absent keys keep their
/// defaults.
pub fn parse_noise(text: &str) -> Result<NoiseModel> {
    let mut m = NoiseModel::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw
            .split('#')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        let (key, value) = match toks.as_slice() {
            [] => continue,
            [k, v] => (*k, *v),
            _ => return Err(Error::parse(line, "expected `<key> <value>`")),
        };
        let v: f64 = value
            .parse()
            .map_err(|_| Error::parse(line, format!("`{value}` is not a number")))?;
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::parse(line, format!("{key} = {v} is outside [0, 1]")));
        }
        match key {
            "p1" => m.p1 = v,
            "p2" => m.p2 = v,
            "p_ro" => m.p_ro = v,
            "p_idle" => m.p_idle = v,
            other => return Err(Error::parse(line, format!("unknown key `{other}`"))),
        }
    }
    Ok(m)
}

pub fn load_noise(path: &Path) -> Result<NoiseModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_noise(&text).map_err(|e| e.in_file(path))
}

const PAULIS: [Option<GateKind>; 4] = [
    None,
    Some(GateKind::X),
    Some(GateKind::Y),
    Some(GateKind::Z),
];

/// Draws the error for one depolarizing event: `None` for identity, otherwise
/// one Pauli per wire (`None` meaning identity on that wire).
pub(crate) fn sample_pauli<R: Rng + ?Sized>(
    arity: usize,
    p: f64,
    rng: &mut R,
) -> Option<[Option<GateKind>; 2]> {
    if p <= 0.0 || rng.random::<f64>() >= p {
        return None;
    }
    Some(if arity == 2 {
        let k = rng.random_range(1..16);
        [PAULIS[k >> 2], PAULIS[k & 3]]
    } else {
        [PAULIS[rng.random_range(1..4)], None]
    })
}

/// With probability `p`, applies a uniformly random non-identity Pauli on
/// `wires` (one or two of them).
pub fn depolarize<R: Rng + ?Sized>(
    state: &mut StateVector,
    wires: &[usize],
    p: f64,
    rng: &mut R,
) -> Result<()> {
    if wires.is_empty() || wires.len() > 2 {
        return Err(Error::Arity {
            gate: "depolarize".into(),
            expected: 2,
            got: wires.len(),
        });
    }
    if let Some(paulis) = sample_pauli(wires.len(), p, rng) {
        for (&w, g) in wires.iter().zip(paulis) {
            if let Some(g) = g {
                state.apply(g, &[w])?;
            }
        }
    }
    Ok(())
}

pub fn flip_readout<R: Rng + ?Sized>(bit: u8, p_ro: f64, rng: &mut R) -> u8 {
    if p_ro > 0.0 && rng.random::<f64>() < p_ro {
        bit ^ 1
    } else {
        bit
    }
}
