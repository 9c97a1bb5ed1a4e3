//! Measurement patterns on open graphs with flow.

pub mod branch;
mod flow;
mod format;
mod graph;
mod interactive;
mod pattern;
mod random;

pub use branch::{bit_string, pack_bits, OutcomeSource, RngSource, BRANCH_EPS};
pub use flow::{validate_flow, z_dependency_set, FlowMap, FlowViolation};
pub use format::{format_pattern, load_pattern, parse_pattern};
pub use graph::{NodeId, OpenGraph};
pub(crate) use interactive::{
    check_inputs, correction_bits, entangle, initial_state, input_key, interactive_core,
};
pub use interactive::{
    corrected_angle, run_interactive, run_interactive_state, run_interactive_with, InputEncoding,
    InteractiveRun, OutcomeLedger,
};
pub use pattern::{
    j_alpha_pattern, CorrectionCase, MeasurementPattern, QubitLayout, ALLOWED_OCTANTS,
};
pub use random::random_pattern;
