use num_complex::Complex64;

use super::circuit::Circuit;
use crate::error::{Error, Result};
use crate::sim::StateVector;

/// Largest width [`verify_equivalence`] will simulate.
pub const MAX_VERIFY_WIRES: usize = 10;

/// Where the logical wires of the first circuit sit in the second, before and
/// after it runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WireMap {
    pub initial: Vec<usize>,
    pub final_: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub max_deviation: f64,
}

const TOLERANCE: f64 = 1e-9;

fn embed(index: usize, map: &[usize]) -> usize {
    map.iter()
        .enumerate()
        .filter(|(l, _)| index >> l & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1 << p)
}

/// Compares the gate unitaries of `c1` and `c2` column by column by simulating
/// every basis input. Measurements are ignored. With `wire_perm`, logical wire
/// `l` of `c1` enters `c2` on `initial[l]` and must leave on `final_[l]`; any
/// other wire of `c2` must stay in `|0⟩`. A single global phase, fixed from the
/// first column, is allowed when `up_to_global_phase` is set.
pub fn verify_equivalence(
    c1: &Circuit,
    c2: &Circuit,
    up_to_global_phase: bool,
    wire_perm: Option<&WireMap>,
) -> Result<Equivalence> {
    for c in [c1, c2] {
        if c.num_wires() > MAX_VERIFY_WIRES {
            return Err(Error::TooManyWires(c.num_wires()));
        }
    }
    let n = c1.num_wires();
    let identity: Vec<usize> = (0..n).collect();
    let (initial, final_) = match wire_perm {
        Some(m) => (m.initial.as_slice(), m.final_.as_slice()),
        None => {
            if c2.num_wires() != n {
                return Err(Error::Shape(format!(
                    "{n} wires vs {} wires without a wire map",
                    c2.num_wires()
                )));
            }
            (identity.as_slice(), identity.as_slice())
        }
    };
    if initial.len() != n || final_.len() != n {
        return Err(Error::Shape("wire map does not cover every wire".into()));
    }
    if n == 0 {
        return Ok(Equivalence {
            equivalent: true,
            max_deviation: 0.0,
        });
    }
    let mut phase: Option<Complex64> = (!up_to_global_phase).then_some(Complex64::new(1.0, 0.0));
    let mut worst: f64 = 0.0;
    for col in 0..1usize << n {
        let mut s1 = StateVector::basis(n, col)?;
        c1.apply_gates(&mut s1)?;
        let mut s2 = StateVector::basis(c2.num_wires(), embed(col, initial))?;
        c2.apply_gates(&mut s2)?;
        let a1 = s1.amplitudes();
        let a2 = s2.amplitudes();
        let ph = *phase.get_or_insert_with(|| {
            let (k, _) = a1
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
                .expect("non-empty");
            let r = a2[embed(k, final_)] / a1[k];
            if r.norm() > 0.0 {
                r / r.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        });
        let mut covered = 0.0;
        for (i, &amp) in a1.iter().enumerate() {
            let other = a2[embed(i, final_)];
            covered += other.norm_sqr();
            worst = worst.max((amp * ph - other).norm());
        }
        // amplitude that leaked onto wires outside the map
        worst = worst.max((1.0 - covered).max(0.0).sqrt());
    }
    Ok(Equivalence {
        equivalent: worst <= TOLERANCE,
        max_deviation: worst,
    })
}

/// Full unitary of the gates in `c` (column `j` is the image of basis state `j`).
pub fn circuit_unitary(c: &Circuit) -> Result<Vec<Vec<Complex64>>> {
    if c.num_wires() > MAX_VERIFY_WIRES {
        return Err(Error::TooManyWires(c.num_wires()));
    }
    let dim = 1usize << c.num_wires();
    let mut cols = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut s = StateVector::basis(c.num_wires(), j)?;
        c.apply_gates(&mut s)?;
        cols.push(s.amplitudes().to_vec());
    }
    Ok((0..dim)
        .map(|r| (0..dim).map(|j| cols[j][r]).collect())
        .collect())
}
