use std::collections::BTreeMap;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::table::CountsTable;
use crate::error::{Error, Result};

/// Two-sample binomial test of `a` vs `b` ones out of `na` and `nb` shots,
/// via the Pearson chi-squared statistic on the 2×2 table. Cells with a zero
/// expected count (both all-zero or both all-one) are indistinguishable and
/// get `p = 1`.
pub fn chi_squared_p(a: u64, na: u64, b: u64, nb: u64) -> f64 {
    let (a, na, b, nb) = (a as f64, na as f64, b as f64, nb as f64);
    let n = na + nb;
    let ones = a + b;
    let zeros = n - ones;
    if ones == 0.0 || zeros == 0.0 || na == 0.0 || nb == 0.0 {
        return 1.0;
    }
    let cells = [
        (a, na * ones / n),
        (na - a, na * zeros / n),
        (b, nb * ones / n),
        (nb - b, nb * zeros / n),
    ];
    let chi2: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    ChiSquared::new(1.0)
        .expect("one degree of freedom")
        .sf(chi2)
}

/// Half the L1 distance between two distributions.
pub fn total_variation(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    0.5 * keys
        .into_iter()
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}

pub fn normalise(counts: &BTreeMap<String, u64>) -> BTreeMap<String, f64> {
    let total: u64 = counts.values().sum();
    counts
        .iter()
        .map(|(k, &v)| (k.clone(), v as f64 / total.max(1) as f64))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellStat {
    pub input: u64,
    pub output_index: usize,
    pub ones_a: u64,
    pub ones_b: u64,
    pub p_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDistance {
    pub input: u64,
    pub tv: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub cells: Vec<CellStat>,
    pub tv: Vec<InputDistance>,
}

impl Comparison {
    pub fn min_p(&self) -> f64 {
        self.cells.iter().map(|c| c.p_value).fold(1.0, f64::min)
    }

    pub fn max_tv(&self) -> f64 {
        self.tv.iter().map(|d| d.tv).fold(0.0, f64::max)
    }

    pub fn all_above(&self, alpha: f64) -> bool {
        self.cells.iter().all(|c| c.p_value > alpha)
    }
}

/// Per-cell chi-squared p-values and per-input TV distances between two tables
/// over the same inputs, outputs and shot count.
pub fn compare_tables(a: &CountsTable, b: &CountsTable) -> Result<Comparison> {
    if a.shots != b.shots || a.outputs != b.outputs || a.inputs() != b.inputs() {
        return Err(Error::Shape(format!(
            "tables differ: {} vs {} shots, {} vs {} outputs, inputs {:?} vs {:?}",
            a.shots,
            b.shots,
            a.outputs,
            b.outputs,
            a.inputs(),
            b.inputs()
        )));
    }
    let mut cells = Vec::new();
    let mut tv = Vec::new();
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        for (k, (&x, &y)) in ra.ones.iter().zip(&rb.ones).enumerate() {
            cells.push(CellStat {
                input: ra.input,
                output_index: k,
                ones_a: x,
                ones_b: y,
                p_value: chi_squared_p(x, a.shots, y, b.shots),
            });
        }
        tv.push(InputDistance {
            input: ra.input,
            tv: total_variation(&normalise(&ra.joint), &normalise(&rb.joint)),
        });
    }
    Ok(Comparison { cells, tv })
}

/// Mean of `|observed − expected|` over cells whose expected 1-frequency lies
/// outside `[0.4, 0.6]`. `expected[r][k]` pairs with row `r`, output `k`.
pub fn mean_abs_deviation(table: &CountsTable, expected: &[Vec<f64>]) -> Option<f64> {
    let mut devs = Vec::new();
    for (row, exp) in table.frequencies().iter().zip(expected) {
        for (&f, &e) in row.iter().zip(exp) {
            if !(0.4..=0.6).contains(&e) {
                devs.push((f - e).abs());
            }
        }
    }
    (!devs.is_empty()).then(|| devs.iter().sum::<f64>() / devs.len() as f64)
}

/// Per-cell sample standard deviation of 1-frequencies across repeated tables.
pub fn frequency_spread(tables: &[CountsTable]) -> Vec<Vec<f64>> {
    let freqs: Vec<Vec<Vec<f64>>> = tables.iter().map(CountsTable::frequencies).collect();
    let Some(first) = freqs.first() else {
        return Vec::new();
    };
    let n = freqs.len() as f64;
    first
        .iter()
        .enumerate()
        .map(|(r, row)| {
            (0..row.len())
                .map(|k| {
                    let xs: Vec<f64> = freqs.iter().map(|f| f[r][k]).collect();
                    let mean = xs.iter().sum::<f64>() / n;
                    let var =
                        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
                    var.sqrt()
                })
                .collect()
        })
        .collect()
}
