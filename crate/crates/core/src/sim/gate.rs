use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::angle::Angle;

pub type Matrix2 = [[Complex64; 2]; 2];
pub type Matrix4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The gate set shared by the state-vector engine and the circuit compiler.
///
/// `Rz(θ)` uses the phase-gate convention `diag(1, e^{iθ})`, so `Rz(π/4)` is
/// exactly `T`. Two-qubit matrices index their local basis as
/// `2·bit(first target) + bit(second target)`; for `CNOT` the first target is the
/// control.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rz(Angle),
    CZ,
    CNOT,
    SWAP,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::CZ | GateKind::CNOT | GateKind::SWAP => 2,
            _ => 1,
        }
    }

    /// Phase applied to `|1⟩` for the diagonal single-qubit gates.
    pub fn diagonal_phase(self) -> Option<Angle> {
        match self {
            GateKind::Z => Some(Angle::PI),
            GateKind::S => Some(Angle::HALF_PI),
            GateKind::Sdg => Some(Angle::THREE_HALF_PI),
            GateKind::T => Some(Angle::QUARTER_PI),
            GateKind::Tdg => Some(Angle::Octant(7)),
            GateKind::Rz(a) => Some(a),
            _ => None,
        }
    }

    pub fn inverse(self) -> GateKind {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::Rz(a) => GateKind::Rz(-a),
            g => g,
        }
    }

    pub fn matrix1(self) -> Option<Matrix2> {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let m = match self {
            GateKind::H => [[h, h], [h, -h]],
            GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
            GateKind::Y => [[ZERO, -I], [I, ZERO]],
            g => {
                let phase = g.diagonal_phase()?.phase();
                [[ONE, ZERO], [ZERO, phase]]
            }
        };
        Some(m)
    }

    pub fn matrix2(self) -> Option<Matrix4> {
        let mut m = [[ZERO; 4]; 4];
        match self {
            GateKind::CZ => {
                for (k, row) in m.iter_mut().enumerate() {
                    row[k] = if k == 3 { -ONE } else { ONE };
                }
            }
            GateKind::CNOT => {
                m[0][0] = ONE;
                m[1][1] = ONE;
                m[2][3] = ONE;
                m[3][2] = ONE;
            }
            GateKind::SWAP => {
                m[0][0] = ONE;
                m[1][2] = ONE;
                m[2][1] = ONE;
                m[3][3] = ONE;
            }
            _ => return None,
        }
        Some(m)
    }

    pub fn name(self) -> String {
        match self {
            GateKind::Rz(a) => match a.as_octant() {
                Some(k) => format!("RZ({k})"),
                None => format!("RZ({:?})", a.as_radians()),
            },
            g => format!("{g:?}").to_uppercase(),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for GateKind {
    type Err = String;

    /// Accepts the names written by [`GateKind::name`], case-insensitively.
    /// `RZ(k)` with an integer `k` means `k·π/4`; anything with a decimal point is
    /// read as radians.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.to_ascii_uppercase();
        let g = match upper.as_str() {
            "H" => GateKind::H,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "S" => GateKind::S,
            "SDG" => GateKind::Sdg,
            "T" => GateKind::T,
            "TDG" => GateKind::Tdg,
            "CZ" => GateKind::CZ,
            "CNOT" | "CX" => GateKind::CNOT,
            "SWAP" => GateKind::SWAP,
            other => {
                let arg = other
                    .strip_prefix("RZ(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| format!("unknown gate `{s}`"))?;
                if let Ok(k) = arg.parse::<i64>() {
                    GateKind::Rz(Angle::octants(k))
                } else {
                    let theta: f64 = arg.parse().map_err(|_| format!("bad RZ angle `{arg}`"))?;
                    GateKind::Rz(Angle::radians(theta))
                }
            }
        };
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_kinds() -> Vec<GateKind> {
        vec![
            GateKind::H,
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::S,
            GateKind::Sdg,
            GateKind::T,
            GateKind::Tdg,
            GateKind::Rz(Angle::Octant(3)),
            GateKind::Rz(Angle::Radians(0.7)),
            GateKind::CZ,
            GateKind::CNOT,
            GateKind::SWAP,
        ]
    }

    #[test]
    fn every_gate_is_unitary() {
        for g in all_kinds() {
            let dim = 1 << g.arity();
            let get = |r: usize, c: usize| -> Complex64 {
                if dim == 2 {
                    g.matrix1().unwrap()[r][c]
                } else {
                    g.matrix2().unwrap()[r][c]
                }
            };
            for r in 0..dim {
                for c in 0..dim {
                    let mut acc = ZERO;
                    for k in 0..dim {
                        acc += get(k, r).conj() * get(k, c);
                    }
                    let expect = if r == c { ONE } else { ZERO };
                    assert!((acc - expect).norm() < 1e-12, "{g} not unitary");
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for g in all_kinds() {
            let parsed: GateKind = g.name().parse().unwrap();
            assert_eq!(parsed, g);
        }
        assert!("FOO".parse::<GateKind>().is_err());
    }
}
