use std::collections::BTreeMap;

use rand::Rng;

use super::circuit::Circuit;
use crate::error::{Error, Result};
use crate::sim::StateVector;

/// Shot counts keyed by classical bit string (first measured bit leftmost).
pub type Counts = BTreeMap<String, u64>;

fn check_terminal(circuit: &Circuit) -> Result<()> {
    if circuit.has_terminal_measurements() {
        Ok(())
    } else {
        Err(Error::Circuit("measurements must be terminal".into()))
    }
}

/// Runs every gate on `|0…0⟩`.
pub fn final_state(circuit: &Circuit) -> Result<StateVector> {
    let mut s = StateVector::zero(circuit.num_wires())?;
    circuit.apply_gates(&mut s)?;
    Ok(s)
}

pub(crate) fn bits_of(index: usize, wires: &[usize]) -> String {
    wires
        .iter()
        .map(|&w| if index >> w & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Exact distribution over the classical bits of a terminal-measurement circuit.
pub fn exact_distribution(circuit: &Circuit) -> Result<BTreeMap<String, f64>> {
    check_terminal(circuit)?;
    let wires: Vec<usize> = circuit.measurements().iter().map(|m| m.0).collect();
    let state = final_state(circuit)?;
    let mut dist = BTreeMap::new();
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            *dist.entry(bits_of(i, &wires)).or_insert(0.0) += p;
        }
    }
    Ok(dist)
}

/// Noiseless sampling: one simulation, then `shots` draws.
pub fn sample_counts<R: Rng + ?Sized>(
    circuit: &Circuit,
    shots: u64,
    rng: &mut R,
) -> Result<Counts> {
    check_terminal(circuit)?;
    let wires: Vec<usize> = circuit.measurements().iter().map(|m| m.0).collect();
    let state = final_state(circuit)?;
    let mut counts = Counts::new();
    for _ in 0..shots {
        *counts
            .entry(bits_of(state.sample_index(rng), &wires))
            .or_insert(0) += 1;
    }
    Ok(counts)
}

fn masked_parity(bits: &[u8], mask: &[usize]) -> u8 {
    mask.iter().fold(0, |acc, &p| acc ^ (bits[p] - b'0'))
}

fn check_masks(width: usize, masks: &[Vec<usize>]) -> Result<()> {
    for m in masks {
        if let Some(&index) = m.iter().find(|&&p| p >= width) {
            return Err(Error::MaskIndex { index, width });
        }
    }
    Ok(())
}

/// Per logical output, the number of shots whose masked XOR is 1.
pub fn parity_postprocess(counts: &Counts, masks: &[Vec<usize>]) -> Result<Vec<u64>> {
    let mut ones = vec![0; masks.len()];
    for (s, &n) in counts {
        check_masks(s.len(), masks)?;
        for (k, m) in masks.iter().enumerate() {
            if masked_parity(s.as_bytes(), m) == 1 {
                ones[k] += n;
            }
        }
    }
    Ok(ones)
}

/// Rewrites each key as the string of its masked parities.
pub fn apply_masks<V: Copy + std::ops::AddAssign + Default>(
    dist: &BTreeMap<String, V>,
    masks: &[Vec<usize>],
) -> Result<BTreeMap<String, V>> {
    let mut out = BTreeMap::new();
    for (s, &v) in dist {
        check_masks(s.len(), masks)?;
        let key: String = masks
            .iter()
            .map(|m| {
                if masked_parity(s.as_bytes(), m) == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        *out.entry(key).or_default() += v;
    }
    Ok(out)
}
