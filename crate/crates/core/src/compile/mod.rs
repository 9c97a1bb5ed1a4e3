//! Lowering protocol runs to gate circuits on a directed coupling map.

mod circuit;
mod coupling;
mod exec;
mod lower;
mod random;
mod rewrite;
mod route;
mod verify;

pub use circuit::{load_circuit, parse_circuit, Circuit, Instruction};
pub use coupling::{
    load_coupling, load_placement, parse_coupling, parse_placement, CouplingMap, Placement,
};
pub use exec::{
    apply_masks, exact_distribution, final_state, parity_postprocess, sample_counts, Counts,
};
pub use lower::{
    compile_qfhe_to_circuit, compile_qfhe_with, logical_wires, lower_qfhe, CompileOptions,
    CompiledCircuit, Lowered, ParityExpr, ParityStrategy, Source,
};
pub use random::random_circuit;
pub use rewrite::{
    cancel_hh, cz_as_cnot, decompose_controlled_sdg, decompose_controlled_sdg_with,
    decompose_swap_onedir, reverse_cnot, rewrite_cz_to_cnot,
};
pub use route::{respects_coupling, route, Routed};
pub use verify::{circuit_unitary, verify_equivalence, Equivalence, WireMap, MAX_VERIFY_WIRES};
