use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts for one classical input.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputCounts {
    pub input: u64,
    /// Per output (in output order), the number of shots that read 1.
    pub ones: Vec<u64>,
    /// Joint output strings (first output leftmost) and their counts.
    pub joint: BTreeMap<String, u64>,
}

impl InputCounts {
    pub fn from_joint(input: u64, outputs: usize, joint: BTreeMap<String, u64>) -> Result<Self> {
        let mut ones = vec![0; outputs];
        for (s, &n) in &joint {
            if s.len() != outputs {
                return Err(Error::Shape(format!(
                    "outcome `{s}` has {} bits, expected {outputs}",
                    s.len()
                )));
            }
            for (k, c) in s.bytes().enumerate() {
                if c == b'1' {
                    ones[k] += n;
                }
            }
        }
        Ok(InputCounts { input, ones, joint })
    }
}

/// Per classical input, per output qubit, the number of 1-readouts out of
/// `shots`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsTable {
    pub shots: u64,
    pub outputs: usize,
    pub rows: Vec<InputCounts>,
}

impl CountsTable {
    pub fn new(shots: u64, outputs: usize) -> Self {
        CountsTable {
            shots,
            outputs,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: InputCounts) -> Result<()> {
        if row.ones.len() != self.outputs {
            return Err(Error::Shape(format!(
                "row for input {} has {} outputs, table has {}",
                row.input,
                row.ones.len(),
                self.outputs
            )));
        }
        let total: u64 = row.joint.values().sum();
        if total != self.shots || row.ones.iter().any(|&c| c > self.shots) {
            return Err(Error::Shape(format!(
                "row for input {} holds {total} shots, table expects {}",
                row.input, self.shots
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn row(&self, input: u64) -> Option<&InputCounts> {
        self.rows.iter().find(|r| r.input == input)
    }

    pub fn inputs(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.input).collect()
    }

    /// 1-frequency of every cell, row-major.
    pub fn frequencies(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| {
                r.ones
                    .iter()
                    .map(|&c| c as f64 / self.shots as f64)
                    .collect()
            })
            .collect()
    }

    /// `input,output_index,ones,shots` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("input,output_index,ones,shots\n");
        for r in &self.rows {
            for (k, c) in r.ones.iter().enumerate() {
                out.push_str(&format!("{},{},{},{}\n", r.input, k, c, self.shots));
            }
        }
        out
    }
}
