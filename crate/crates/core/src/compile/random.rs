use rand::Rng;

use super::circuit::Circuit;
use crate::angle::Angle;
use crate::sim::GateKind;

/// A random unitary circuit (no measurements) over the whole gate set.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, num_wires: usize, len: usize) -> Circuit {
    const ONE: [GateKind; 8] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
    ];
    const TWO: [GateKind; 3] = [GateKind::CZ, GateKind::CNOT, GateKind::SWAP];
    let mut c = Circuit::new(num_wires);
    for _ in 0..len {
        let r: f64 = rng.random();
        if num_wires >= 2 && r < 0.4 {
            let a = rng.random_range(0..num_wires);
            let b = (a + rng.random_range(1..num_wires)) % num_wires;
            c.add(TWO[rng.random_range(0..TWO.len())], &[a, b]);
        } else if r < 0.5 {
            c.add(
                GateKind::Rz(Angle::octants(rng.random_range(0..8))),
                &[rng.random_range(0..num_wires)],
            );
        } else {
            // H-heavy so that cancel_hh has something to do
            let g = if rng.random_bool(0.4) {
                GateKind::H
            } else {
                ONE[rng.random_range(0..ONE.len())]
            };
            c.add(g, &[rng.random_range(0..num_wires)]);
        }
    }
    c
}
