//! Dense state-vector engine.

mod gate;
mod state;

pub use gate::{GateKind, Matrix2, Matrix4};
pub use state::{make_bell_pair, Measurement, PauliBasis, StateVector, MAX_QUBITS};

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::angle::Angle;

    fn one_qubit_gate() -> impl Strategy<Value = GateKind> {
        prop_oneof![
            Just(GateKind::H),
            Just(GateKind::X),
            Just(GateKind::Y),
            Just(GateKind::Z),
            Just(GateKind::S),
            Just(GateKind::Sdg),
            Just(GateKind::T),
            Just(GateKind::Tdg),
            (0u8..8).prop_map(|k| GateKind::Rz(Angle::Octant(k))),
        ]
    }

    fn gate_on(n: usize) -> impl Strategy<Value = (GateKind, Vec<usize>)> {
        prop_oneof![
            (one_qubit_gate(), 0..n).prop_map(|(g, q)| (g, vec![q])),
            (
                prop_oneof![
                    Just(GateKind::CZ),
                    Just(GateKind::CNOT),
                    Just(GateKind::SWAP)
                ],
                0..n,
                1..n
            )
                .prop_map(move |(g, a, d)| (g, vec![a, (a + d) % n])),
        ]
    }

    fn random_state(n: usize) -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map(
            "non-zero",
            |v| {
                let norm: f64 = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
                (norm > 1e-3).then(|| {
                    StateVector::from_amplitudes(
                        v.iter()
                            .map(|(a, b)| num_complex::Complex64::new(a / norm, b / norm))
                            .collect(),
                    )
                    .unwrap()
                })
            },
        )
    }

    fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    proptest! {
        #[test]
        fn gates_preserve_norm(start in random_state(3), gates in prop::collection::vec(gate_on(3), 0..40)) {
            let mut s = start;
            for (g, t) in gates {
                s.apply(g, &t).unwrap();
                prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
            }
        }

        #[test]
        fn involutions_and_phase_ladder(start in random_state(2), q in 0usize..2) {
            for g in [GateKind::H, GateKind::X, GateKind::Z] {
                let mut s = start.clone();
                s.apply(g, &[q]).unwrap();
                s.apply(g, &[q]).unwrap();
                prop_assert!(max_diff(&s, &start) < 1e-12);
            }
            let mut tt = start.clone();
            tt.apply(GateKind::T, &[q]).unwrap();
            tt.apply(GateKind::T, &[q]).unwrap();
            let mut s = start.clone();
            s.apply(GateKind::S, &[q]).unwrap();
            prop_assert!(max_diff(&tt, &s) < 1e-12);
            s.apply(GateKind::S, &[q]).unwrap();
            let mut z = start.clone();
            z.apply(GateKind::Z, &[q]).unwrap();
            prop_assert!(max_diff(&s, &z) < 1e-12);
        }

        #[test]
        fn measurement_outcomes_are_complete(start in random_state(2), q in 0usize..2, k in 0u8..8) {
            let p = start.rotated_probabilities(q, Angle::Octant(k)).unwrap();
            prop_assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
            let p1 = start.probability_of_one(q).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&p1));
        }
    }

    #[test]
    fn bell_correlations() {
        use rand::SeedableRng;
        for (x, y) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            for seed in 0..20 {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                let mut b = make_bell_pair(x, y);
                let m0 = b.measure_z(0, &mut rng).unwrap().bit;
                let m1 = b.measure_z(1, &mut rng).unwrap().bit;
                assert_eq!(m0 ^ m1, y, "beta_{x}{y}");
            }
        }
    }
}
