use std::collections::BTreeMap;

use super::protocol::{client_correct, output_flips, prepare, server_measure, QfheOptions};
use crate::error::{Error, Result};
use crate::mbqc::branch::{explore, readout_distribution};
use crate::mbqc::{bit_string, correction_bits, pack_bits, MeasurementPattern};

/// Cap on branching measurements walked by [`enumerate_branches`].
pub const MAX_BRANCHING: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Interactive,
    Qfhe,
}

/// Exact distributions over output bit strings (first output leftmost).
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistributions {
    /// Corrected outputs.
    pub outputs: BTreeMap<String, f64>,
    /// Raw output readouts before any correction.
    pub raw_outputs: BTreeMap<String, f64>,
}

impl ExactDistributions {
    /// `P(output k = 1)` for the raw readouts.
    pub fn raw_marginals(&self) -> Vec<f64> {
        marginals(&self.raw_outputs)
    }

    pub fn output_marginals(&self) -> Vec<f64> {
        marginals(&self.outputs)
    }
}

pub fn marginals(dist: &BTreeMap<String, f64>) -> Vec<f64> {
    let m = dist.keys().next().map_or(0, String::len);
    (0..m)
        .map(|k| {
            dist.iter()
                .filter(|(s, _)| s.as_bytes()[k] == b'1')
                .map(|(_, p)| p)
                .sum::<f64>()
                + 0.0
        })
        .collect()
}

/// Largest per-string absolute difference, treating missing strings as 0.
pub fn max_abs_diff(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    a.keys()
        .chain(b.keys())
        .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
        .fold(0.0, f64::max)
}

/// Exact corrected-output distribution by walking every measurement branch.
pub fn enumerate_branches(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    mode: Mode,
) -> Result<BTreeMap<String, f64>> {
    Ok(enumerate_branches_with(pattern, input_bits, mode, QfheOptions::default())?.outputs)
}

pub fn enumerate_branches_with(
    pattern: &MeasurementPattern,
    input_bits: &[u8],
    mode: Mode,
    opts: QfheOptions,
) -> Result<ExactDistributions> {
    let branching = pattern.order().len()
        + match mode {
            Mode::Interactive => 0,
            Mode::Qfhe => pattern.quarter_nodes().len(),
        };
    if branching > MAX_BRANCHING {
        return Err(Error::BranchLimit(branching));
    }
    let outputs = pattern.graph().outputs();
    let m = outputs.len();
    let mut corrected = vec![0.0; 1 << m];
    let mut raw = vec![0.0; 1 << m];
    explore(
        |src| match mode {
            Mode::Interactive => {
                let (state, layout, ledger) =
                    crate::mbqc::interactive_core(pattern, None, input_bits, opts.encoding, src)?;
                let flips = outputs
                    .iter()
                    .map(|&o| {
                        correction_bits(pattern, &ledger, input_bits, opts.encoding, o).map(|c| c.0)
                    })
                    .collect::<Result<Vec<u8>>>()?;
                let qubits: Vec<usize> = outputs.iter().map(|&o| layout.qubit(o)).collect();
                Ok((readout_distribution(&state, &qubits), pack_bits(&flips)))
            }
            Mode::Qfhe => {
                let (mut state, layout) = prepare(pattern, input_bits, opts)?;
                let s = server_measure(pattern, &layout, &mut state, src)?;
                let (b, _, _) =
                    client_correct(pattern, &layout, &mut state, &s, input_bits, opts, src)?;
                let flips = output_flips(pattern, &b);
                let qubits: Vec<usize> = outputs.iter().map(|&o| layout.qubit(o)).collect();
                Ok((readout_distribution(&state, &qubits), pack_bits(&flips)))
            }
        },
        |w, (dist, flip)| {
            for (key, p) in dist {
                raw[key] += w * p;
                corrected[key ^ flip] += w * p;
            }
        },
    )?;
    let to_map = |v: Vec<f64>| {
        v.into_iter()
            .enumerate()
            .filter(|(_, p)| *p > 0.0)
            .map(|(k, p)| (bit_string(k, m), p))
            .collect()
    };
    Ok(ExactDistributions {
        outputs: to_map(corrected),
        raw_outputs: to_map(raw),
    })
}
