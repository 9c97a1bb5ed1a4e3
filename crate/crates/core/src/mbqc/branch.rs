//! Measurement outcome sources: random sampling, or exhaustive replay of every
//! branch with its exact probability.

use rand::Rng;

use crate::angle::Angle;
use crate::error::Result;
use crate::sim::StateVector;

/// Branches whose probability falls below this are treated as impossible.
pub const BRANCH_EPS: f64 = 1e-12;

pub trait OutcomeSource {
    /// Chooses an outcome given `P(1)`.
    fn pick(&mut self, p1: f64) -> u8;
}

pub struct RngSource<'a, R: Rng + ?Sized>(pub &'a mut R);

impl<R: Rng + ?Sized> OutcomeSource for RngSource<'_, R> {
    fn pick(&mut self, p1: f64) -> u8 {
        if p1 <= BRANCH_EPS {
            0
        } else if p1 >= 1.0 - BRANCH_EPS {
            1
        } else {
            u8::from(self.0.random::<f64>() < p1)
        }
    }
}

/// Follows a fixed prefix of outcomes, then takes the first possible outcome at
/// every later measurement while noting where the other branch remains open.
pub(crate) struct ForcedSource {
    path: Vec<u8>,
    prefix: usize,
    pos: usize,
    open: Vec<usize>,
    weight: f64,
}

impl ForcedSource {
    fn new(prefix: Vec<u8>) -> Self {
        ForcedSource {
            prefix: prefix.len(),
            path: prefix,
            pos: 0,
            open: Vec::new(),
            weight: 1.0,
        }
    }
}

impl OutcomeSource for ForcedSource {
    fn pick(&mut self, p1: f64) -> u8 {
        let p = [1.0 - p1, p1];
        let bit = if self.pos < self.prefix {
            self.path[self.pos]
        } else {
            let bit = u8::from(p[0] <= BRANCH_EPS);
            if bit == 0 && p[1] > BRANCH_EPS {
                self.open.push(self.pos);
            }
            self.path.push(bit);
            bit
        };
        self.weight *= p[usize::from(bit)];
        self.pos += 1;
        bit
    }
}

/// Runs `run` once per outcome branch and hands each result to `visit` with the
/// branch probability.
pub(crate) fn explore<T>(
    mut run: impl FnMut(&mut ForcedSource) -> Result<T>,
    mut visit: impl FnMut(f64, T),
) -> Result<()> {
    let mut stack = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let mut src = ForcedSource::new(prefix);
        let out = run(&mut src)?;
        for &j in &src.open {
            let mut sibling = src.path[..j].to_vec();
            sibling.push(1);
            stack.push(sibling);
        }
        visit(src.weight, out);
    }
    Ok(())
}

/// Measures qubit `q` in the `φ` basis with the outcome chosen by `src`. The
/// qubit is left in the computational state `|s⟩` rather than `|±_φ⟩`, which
/// keeps the rest of the register separable for [`StateVector::extract`].
pub(crate) fn measure_with<S: OutcomeSource + ?Sized>(
    state: &mut StateVector,
    q: usize,
    phi: Angle,
    src: &mut S,
) -> Result<u8> {
    state.rotate_into_z(q, phi);
    let bit = src.pick(state.probability_of_one(q)?);
    state.project(q, bit)?;
    Ok(bit)
}

/// Exact distribution of the computational readout of `qubits`, keyed by an index
/// whose most significant bit is `qubits[0]`.
pub(crate) fn readout_distribution(state: &StateVector, qubits: &[usize]) -> Vec<(usize, f64)> {
    let m = qubits.len();
    let mut dist = vec![0.0; 1 << m];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let key = qubits
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &q)| acc | (i >> q & 1) << (m - 1 - j));
        dist[key] += p;
    }
    dist.into_iter()
        .enumerate()
        .filter(|(_, p)| *p > 0.0)
        .collect()
}

/// Renders `m` bits of `key`, most significant first.
pub fn bit_string(key: usize, m: usize) -> String {
    (0..m)
        .map(|j| {
            if key >> (m - 1 - j) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Packs bits into an index whose most significant bit is `bits[0]`.
pub fn pack_bits(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | usize::from(b & 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::GateKind;

    #[test]
    fn explore_covers_all_branches_once() {
        let mut leaves = Vec::new();
        explore(
            |src| {
                let mut s = StateVector::plus(3)?;
                s.apply(GateKind::CZ, &[0, 1])?;
                let a = measure_with(&mut s, 0, Angle::ZERO, src)?;
                let b = measure_with(&mut s, 1, Angle::HALF_PI, src)?;
                let c = measure_with(&mut s, 2, Angle::ZERO, src)?;
                Ok([a, b, c])
            },
            |w, bits| leaves.push((bits, w)),
        )
        .unwrap();
        // qubit 2 is |+⟩ so measuring at angle 0 is deterministic
        assert_eq!(leaves.len(), 4);
        assert!(leaves.iter().all(|(b, _)| b[2] == 0));
        let total: f64 = leaves.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn readout_keys_are_big_endian_over_the_list() {
        let s = StateVector::basis(3, 0b001).unwrap();
        assert_eq!(readout_distribution(&s, &[0, 1]), vec![(0b10, 1.0)]);
        assert_eq!(bit_string(0b10, 2), "10");
        assert_eq!(pack_bits(&[1, 0]), 0b10);
    }
}
