use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{input_bits, reference_pattern};
use crate::compile::{
    apply_masks, circuit_unitary, cz_as_cnot, decompose_controlled_sdg_with, decompose_swap_onedir,
    exact_distribution, lower_qfhe, reverse_cnot, verify_equivalence, Circuit, CompileOptions,
    Instruction,
};
use crate::error::Result;
use crate::mbqc::{random_pattern, validate_flow, FlowMap, MeasurementPattern, NodeId};
use crate::qfhe::{
    enumerate_branches, enumerate_branches_with, max_abs_diff, Mode, Mutation, QfheOptions,
};
use crate::sim::GateKind;

/// Deliberate faults that the suite must catch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelftestOptions {
    pub mutation: Mutation,
    pub control_phase: Option<GateKind>,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            mutation: Mutation::None,
            control_phase: CompileOptions::default().control_phase,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SelftestSummary {
    pub checks: Vec<Check>,
}

impl SelftestSummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

const EXACT: f64 = 1e-9;
const MATRIX: f64 = 1e-12;

fn complex(z: Complex64) -> String {
    let r = |x: f64| (x * 1e9).round() / 1e9 + 0.0;
    match (r(z.re), r(z.im)) {
        (re, 0.0) => format!("{re}"),
        (0.0, 1.0) => "i".into(),
        (0.0, -1.0) => "-i".into(),
        (0.0, im) => format!("{im}i"),
        (re, im) => format!("{re}{im:+}i"),
    }
}

fn circuit(wires: usize, ins: Vec<Instruction>) -> Result<Circuit> {
    Circuit::from_instructions(wires, ins)
}

fn controlled_sdg_check(control_phase: Option<GateKind>) -> Result<(bool, String)> {
    let u = circuit_unitary(&circuit(
        2,
        decompose_controlled_sdg_with(0, 1, control_phase),
    )?)?;
    let i = Complex64::new(0.0, 1.0);
    let want = [
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        -i,
    ];
    let mut worst = (0.0, 0);
    for (r, row) in u.iter().enumerate() {
        for (c, &entry) in row.iter().enumerate() {
            let expect = if r == c {
                want[r]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let d = (entry - expect).norm();
            if d > worst.0 {
                worst = (d, r * 4 + c);
            }
        }
    }
    // basis index is control + 2·target, so |c=1,t=1⟩ is 3
    let (r, c) = (worst.1 / 4, worst.1 % 4);
    let expect = if r == c {
        want[r]
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(if worst.0 <= MATRIX {
        (true, "matrix is diag(1,1,1,-i)".into())
    } else {
        (
            false,
            format!(
                "entry ({r},{c}): expected {} got {} (|11> entry {})",
                complex(expect),
                complex(u[r][c]),
                complex(u[3][3])
            ),
        )
    })
}

fn equivalence(a: Circuit, b: Circuit) -> Result<(bool, String)> {
    let e = verify_equivalence(&a, &b, false, None)?;
    Ok((
        e.equivalent,
        format!("max deviation {:.1e}", e.max_deviation),
    ))
}

fn single(kind: GateKind, wires: &[usize]) -> Result<Circuit> {
    circuit(2, vec![Instruction::gate(kind, wires)])
}

fn deferred_vs_interactive(
    patterns: &[MeasurementPattern],
    mutation: Mutation,
) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let opts = QfheOptions {
        mutation,
        ..Default::default()
    };
    for p in patterns {
        let width = p.graph().inputs().len();
        for k in 0..1u64 << width {
            let bits = input_bits(k, width);
            let a = enumerate_branches(p, &bits, Mode::Interactive)?;
            let b = enumerate_branches_with(p, &bits, Mode::Qfhe, opts)?;
            worst = worst.max(max_abs_diff(&a, &b.outputs));
        }
    }
    Ok((
        worst <= EXACT,
        format!("max |p_deferred - p_interactive| = {worst:.1e}"),
    ))
}

fn compiled_vs_enumeration(control_phase: Option<GateKind>) -> Result<(bool, String)> {
    let p = reference_pattern();
    let mut worst: f64 = 0.0;
    let opts = CompileOptions {
        control_phase,
        ..Default::default()
    };
    for k in 0..8 {
        let bits = input_bits(k, 3);
        let oracle = enumerate_branches(&p, &bits, Mode::Qfhe)?;
        let (c, _, masks, _) = lower_qfhe(&p, &bits, opts)?;
        let dist: BTreeMap<String, f64> = apply_masks(&exact_distribution(&c)?, &masks)?;
        worst = worst.max(max_abs_diff(&oracle, &dist));
    }
    Ok((
        worst <= EXACT,
        format!("max |p_circuit - p_oracle| = {worst:.1e}"),
    ))
}

fn flow_checks() -> Result<(bool, String)> {
    let p = reference_pattern();
    let clean = validate_flow(p.graph(), p.flow())?;
    let mut f = p.flow().map().clone();
    f.insert(NodeId(1), NodeId(5));
    let broken = validate_flow(p.graph(), &FlowMap::with_order(f, p.order().to_vec()))?;
    Ok((
        clean.is_empty() && !broken.is_empty(),
        format!(
            "reference: {} violations, corrupted: {}",
            clean.len(),
            broken.len()
        ),
    ))
}

/// Runs the oracle suite.
pub fn selftest(opts: SelftestOptions) -> SelftestSummary {
    let mut s = SelftestSummary::default();
    s.push("flow validators", flow_checks());
    s.push(
        "controlled-sdg matrix",
        controlled_sdg_check(opts.control_phase),
    );
    s.push(
        "one-direction swap",
        (|| {
            equivalence(
                circuit(2, decompose_swap_onedir(0, 1, true))?,
                single(GateKind::SWAP, &[0, 1])?,
            )
        })(),
    );
    s.push(
        "cz as h-cnot-h",
        (|| {
            equivalence(
                circuit(2, cz_as_cnot(0, 1))?,
                single(GateKind::CZ, &[0, 1])?,
            )
        })(),
    );
    s.push(
        "reversed cnot",
        (|| {
            equivalence(
                circuit(2, reverse_cnot(0, 1))?,
                single(GateKind::CNOT, &[1, 0])?,
            )
        })(),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut patterns = vec![reference_pattern()];
    patterns.extend((0..20).map(|_| random_pattern(&mut rng, 4)));
    s.push(
        "deferred equals interactive",
        deferred_vs_interactive(&patterns, opts.mutation),
    );
    s.push(
        "compiled circuit equals oracle",
        compiled_vs_enumeration(opts.control_phase),
    );
    s
}
