use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;
use qfhe_core::compile::{
    apply_masks, cancel_hh, circuit_unitary, compile_qfhe_to_circuit, compile_qfhe_with,
    cz_as_cnot, decompose_controlled_sdg, decompose_swap_onedir, exact_distribution, lower_qfhe,
    parity_postprocess, random_circuit, respects_coupling, reverse_cnot, rewrite_cz_to_cnot, route,
    sample_counts, verify_equivalence, Circuit, CompileOptions, Counts, CouplingMap, Instruction,
    ParityStrategy, Placement, WireMap,
};
use qfhe_core::harness::{chi_squared_p, input_bits, reference_pattern};
use qfhe_core::mbqc::{run_interactive, MeasurementPattern, NodeId, OpenGraph};
use qfhe_core::qfhe::{enumerate_branches, max_abs_diff, Mode};
use qfhe_core::sim::GateKind;
use qfhe_core::Angle;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn circ(n: usize, ins: Vec<Instruction>) -> Circuit {
    Circuit::from_instructions(n, ins).unwrap()
}

fn gate(k: GateKind, w: &[usize]) -> Instruction {
    Instruction::gate(k, w)
}

fn max_entry_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn diag(entries: &[Complex64]) -> Vec<Vec<Complex64>> {
    let n = entries.len();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        entries[r]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[test]
fn controlled_sdg_matrix() {
    let u = circuit_unitary(&circ(2, decompose_controlled_sdg(0, 1))).unwrap();
    let want = diag(&[ONE, ONE, ONE, Complex64::new(0.0, -1.0)]);
    assert!(max_entry_diff(&u, &want) < 1e-12);

    // applied twice it is a controlled-Z
    let mut twice = decompose_controlled_sdg(0, 1);
    twice.extend(decompose_controlled_sdg(0, 1));
    let u2 = circuit_unitary(&circ(2, twice)).unwrap();
    let cz = circuit_unitary(&circ(2, vec![gate(GateKind::CZ, &[0, 1])])).unwrap();
    assert!(max_entry_diff(&u2, &cz) < 1e-12);
}

#[test]
fn controlled_sdg_leaves_target_alone_when_control_is_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let mut prep = random_circuit(&mut rng, 1, 12).instructions().to_vec();
        let mut with = Circuit::new(2);
        let mut without = Circuit::new(2);
        for ins in prep.drain(..) {
            let Instruction::Gate { kind, .. } = ins else {
                unreachable!()
            };
            with.push(gate(kind, &[1])).unwrap();
            without.push(gate(kind, &[1])).unwrap();
        }
        for ins in decompose_controlled_sdg(0, 1) {
            with.push(ins).unwrap();
        }
        let a = qfhe_core::compile::final_state(&with).unwrap();
        let b = qfhe_core::compile::final_state(&without).unwrap();
        assert!(a.trace_distance(&b) < 1e-12);
        assert!((a.inner(&b) - ONE).norm() < 1e-12);
    }
}

#[test]
fn swap_from_one_direction() {
    let swap = circ(2, vec![gate(GateKind::SWAP, &[0, 1])]);
    for lower in [false, true] {
        let d = circ(2, decompose_swap_onedir(0, 1, lower));
        let e = verify_equivalence(&swap, &d, false, None).unwrap();
        assert!(e.max_deviation < 1e-12);
        let directions: Vec<(usize, usize)> = d
            .two_qubit_gates()
            .filter(|(k, _, _)| *k == GateKind::CNOT)
            .map(|(_, a, b)| (a, b))
            .collect();
        assert!(directions.iter().all(|&p| p == (0, 1)));
    }
}

#[test]
fn cz_and_reversed_cnot_identities() {
    let cz = circ(2, vec![gate(GateKind::CZ, &[0, 1])]);
    let lowered = circ(2, cz_as_cnot(0, 1));
    assert!(
        verify_equivalence(&cz, &lowered, false, None)
            .unwrap()
            .max_deviation
            < 1e-12
    );
    let back = circ(2, vec![gate(GateKind::CNOT, &[1, 0])]);
    let rev = circ(2, reverse_cnot(0, 1));
    assert!(
        verify_equivalence(&back, &rev, false, None)
            .unwrap()
            .max_deviation
            < 1e-12
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rewrites_preserve_unitaries(seed in any::<u64>(), n in 2usize..=4, len in 0usize..40) {
        let c = random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), n, len);
        let u = circuit_unitary(&c).unwrap();
        let cancelled = cancel_hh(&c);
        prop_assert!(max_entry_diff(&u, &circuit_unitary(&cancelled).unwrap()) <= 1e-12);
        prop_assert_eq!(cancel_hh(&cancelled), cancelled.clone());
        prop_assert!(cancelled.len() <= c.len());
        let lowered = rewrite_cz_to_cnot(&c);
        prop_assert!(lowered.two_qubit_gates().all(|(k, _, _)| k != GateKind::CZ));
        prop_assert!(max_entry_diff(&u, &circuit_unitary(&lowered).unwrap()) <= 1e-12);
    }

    #[test]
    fn routing_is_sound_on_random_rings(seed in any::<u64>(), nodes in 3usize..=6, len in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = CouplingMap::ring(nodes);
        let wires = rng.random_range(2..=nodes);
        let c = random_circuit(&mut rng, wires, len);
        let mut phys: Vec<usize> = (0..nodes).collect();
        phys.shuffle(&mut rng);
        phys.truncate(wires);
        check_routing(&c, &map, Placement::new(phys, nodes).unwrap())?;
    }
}

fn check_routing(
    c: &Circuit,
    map: &CouplingMap,
    placement: Placement,
) -> Result<(), TestCaseError> {
    let r = route(c, map, &placement).unwrap();
    prop_assert!(respects_coupling(&r.circuit, map));
    let wm = WireMap {
        initial: r.initial.as_slice().to_vec(),
        final_: r.final_placement.as_slice().to_vec(),
    };
    let e = verify_equivalence(c, &r.circuit, true, Some(&wm)).unwrap();
    prop_assert!(e.max_deviation <= 1e-9, "deviation {}", e.max_deviation);
    Ok(())
}

#[test]
fn routes_a_distant_cnot_along_a_path() {
    let path = CouplingMap::new(3, [(0, 1), (1, 2)]).unwrap();
    let c = circ(
        3,
        vec![gate(GateKind::H, &[0]), gate(GateKind::CNOT, &[0, 2])],
    );
    let r = route(&c, &path, &Placement::identity(3)).unwrap();
    assert_eq!(r.swaps, 1);
    assert!(respects_coupling(&r.circuit, &path));
    assert_eq!(r.final_placement.as_slice(), &[1, 0, 2]);
    let wm = WireMap {
        initial: vec![0, 1, 2],
        final_: vec![1, 0, 2],
    };
    assert!(
        verify_equivalence(&c, &r.circuit, false, Some(&wm))
            .unwrap()
            .equivalent
    );
}

#[test]
fn conformant_circuits_route_unchanged() {
    let map = CouplingMap::ring(4);
    let c = circ(
        4,
        vec![
            gate(GateKind::H, &[0]),
            gate(GateKind::CNOT, &[0, 1]),
            gate(GateKind::T, &[2]),
            gate(GateKind::CNOT, &[3, 0]),
        ],
    );
    let r = route(&c, &map, &Placement::identity(4)).unwrap();
    assert_eq!(r.circuit, c);
    assert_eq!(r.swaps, 0);
}

fn routing_cases(map: &CouplingMap, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10 {
        let c = random_circuit(&mut rng, 5, 30);
        let mut phys: Vec<usize> = (0..map.num_nodes()).collect();
        phys.shuffle(&mut rng);
        phys.truncate(5);
        check_routing(&c, map, Placement::new(phys, map.num_nodes()).unwrap()).unwrap();
    }
}

#[test]
fn five_wire_circuits_on_a_ring() {
    routing_cases(&CouplingMap::ring(5), 10);
}

#[test]
fn five_wire_circuits_on_ladder_submaps() {
    let ladder = CouplingMap::ladder16();
    for (k, nodes) in [
        vec![0, 1, 2, 8, 9, 10],
        vec![3, 4, 5, 6, 11, 12, 13, 14],
        vec![5, 6, 7, 13, 14, 15],
    ]
    .iter()
    .enumerate()
    {
        let sub = ladder.submap(nodes).unwrap();
        assert!(sub.is_connected());
        routing_cases(&sub, 20 + k as u64);
    }
}

fn compiled_distribution(c: &Circuit, masks: &[Vec<usize>]) -> BTreeMap<String, f64> {
    apply_masks(&exact_distribution(c).unwrap(), masks).unwrap()
}

#[test]
fn compiled_reference_circuit_matches_enumeration() {
    let p = reference_pattern();
    let ladder = CouplingMap::ladder16();
    let placement = Placement::new(vec![13, 11, 5, 7, 1, 14, 12, 2, 6, 4, 15], 16).unwrap();
    for k in 0..8 {
        let bits = input_bits(k, 3);
        let oracle = enumerate_branches(&p, &bits, Mode::Qfhe).unwrap();
        for strategy in [ParityStrategy::FanIn, ParityStrategy::ClassicalParity] {
            let opts = CompileOptions {
                strategy,
                ..CompileOptions::default()
            };
            let cc = compile_qfhe_with(&p, &bits, &placement, &ladder, opts).unwrap();
            assert_eq!(cc.controlled_sdg_count, 2);
            assert!(respects_coupling(&cc.routed.circuit, &ladder));
            let logical = compiled_distribution(&cc.logical, &cc.masks);
            let routed = compiled_distribution(&cc.routed.circuit, &cc.masks);
            assert!(max_abs_diff(&logical, &oracle) < 1e-9, "input {k}");
            assert!(max_abs_diff(&routed, &oracle) < 1e-9, "input {k}");
        }
    }
}

#[test]
fn no_quarter_nodes_means_no_controlled_sdg() {
    let ids = [1, 2, 3].map(NodeId);
    let g = OpenGraph::new(
        ids,
        [(ids[0], ids[1]), (ids[1], ids[2])],
        vec![ids[0]],
        vec![ids[2]],
    )
    .unwrap();
    let p = MeasurementPattern::from_flow(
        g,
        BTreeMap::from([(ids[0], ids[1]), (ids[1], ids[2])]),
        BTreeMap::from([(ids[0], Angle::HALF_PI), (ids[1], Angle::ZERO)]),
    )
    .unwrap();
    let (c, labels, _, csdg) = lower_qfhe(&p, &[1], CompileOptions::default()).unwrap();
    assert_eq!(csdg, 0);
    assert_eq!(c.num_wires(), 3);
    assert_eq!(labels, ["n1", "n2", "n3"]);
}

#[test]
fn parity_postprocess_matches_a_per_shot_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let width = rng.random_range(1..8);
        let shots: Vec<String> = (0..rng.random_range(1..60))
            .map(|_| {
                (0..width)
                    .map(|_| if rng.random_bool(0.5) { '1' } else { '0' })
                    .collect()
            })
            .collect();
        let masks: Vec<Vec<usize>> = (0..rng.random_range(1..4))
            .map(|_| (0..width).filter(|_| rng.random_bool(0.5)).collect())
            .collect();
        let mut counts = Counts::new();
        for s in &shots {
            *counts.entry(s.clone()).or_insert(0) += 1;
        }
        let want: Vec<u64> = masks
            .iter()
            .map(|m| {
                shots
                    .iter()
                    .filter(|s| m.iter().filter(|&&p| s.as_bytes()[p] == b'1').count() % 2 == 1)
                    .count() as u64
            })
            .collect();
        assert_eq!(parity_postprocess(&counts, &masks).unwrap(), want);
    }
}

#[test]
fn sampled_compiled_circuit_agrees_with_interactive_runs() {
    let p = reference_pattern();
    let ladder = CouplingMap::ladder16();
    let placement = Placement::new(vec![13, 11, 5, 7, 1, 14, 12, 2, 6, 4, 15], 16).unwrap();
    let shots = 10_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in 0..8 {
        let bits = input_bits(k, 3);
        let cc = compile_qfhe_to_circuit(&p, &bits, &placement, &ladder).unwrap();
        let counts = sample_counts(&cc.routed.circuit, shots, &mut rng).unwrap();
        let compiled = parity_postprocess(&counts, &cc.masks).unwrap();
        let mut interactive = [0u64; 3];
        for _ in 0..shots {
            let run = run_interactive(&p, &bits, &mut rng).unwrap();
            for (o, &b) in interactive.iter_mut().zip(&run.outputs) {
                *o += b as u64;
            }
        }
        for (a, b) in compiled.iter().zip(&interactive) {
            let pv = chi_squared_p(*a, shots, *b, shots);
            assert!(pv > 0.001, "input {k}: {a} vs {b}, p = {pv}");
        }
    }
}
