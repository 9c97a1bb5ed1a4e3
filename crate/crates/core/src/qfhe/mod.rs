//! Two-party delegation: the server measures at default angles only, the client
//! hides inputs behind Z keys and corrects everything after the fact.

mod deferred;
mod enumerate;
mod keys;
mod protocol;

pub(crate) use deferred::correct_node;
pub use deferred::{deferred_corrections, deferred_corrections_with, Mutation, Parity};
pub use enumerate::{
    enumerate_branches, enumerate_branches_with, marginals, max_abs_diff, ExactDistributions, Mode,
    MAX_BRANCHING,
};
pub use keys::{client_basis, encode_input, key_update_t};
pub use protocol::{
    run_qfhe, run_qfhe_with, BellVariant, ClientState, Direction, Message, ProtocolTranscript,
    QfheOptions, QfheRun, ServerView,
};
