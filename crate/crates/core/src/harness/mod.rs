//! Experiment driver: runs, tables, statistics, reports and the self-test.

mod reference;
mod report;
mod run;
mod selftest;
mod stats;
mod table;

pub use reference::{input_bits, reference_pattern};
pub use report::{emit_report, load_table, COMPARISON_FILE, CSV_FILE, REPORT_FILE};
pub use run::{
    input_seed, run_experiment, run_setup, CircuitSummary, Experiment, ExperimentConfig, Mode,
    PatternSummary, Report, ServerRow, ServerSection, Setup,
};
pub use selftest::{selftest, Check, SelftestOptions, SelftestSummary};
pub use stats::{
    chi_squared_p, compare_tables, frequency_spread, mean_abs_deviation, normalise,
    total_variation, CellStat, Comparison, InputDistance,
};
pub use table::{CountsTable, InputCounts};
