use std::path::PathBuf;

use thiserror::Error;

use crate::mbqc::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("register of {0} qubits is outside the supported range 1..=20")]
    RegisterSize(usize),

    #[error("amplitude vector of length {0} is not a power of two")]
    AmplitudeLength(usize),

    #[error("state is not normalised (norm^2 = {0})")]
    NotNormalised(f64),

    #[error("gate {gate} acts on {expected} qubit(s) but {got} target(s) were given")]
    Arity {
        gate: String,
        expected: usize,
        got: usize,
    },

    #[error("qubit {index} is out of range for a {num_qubits}-qubit register")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("target qubit {0} appears more than once")]
    DuplicateTarget(usize),

    #[error("outcome {bit} on qubit {qubit} has zero probability")]
    ImpossibleOutcome { qubit: usize, bit: u8 },

    #[error("invalid open graph: {0}")]
    Graph(String),

    #[error("flow maps node {from} to {to}, which is not a graph node")]
    FlowTarget { from: NodeId, to: NodeId },

    #[error("invalid flow: {0}")]
    InvalidFlow(String),

    #[error("invalid pattern: {0}")]
    Pattern(String),

    #[error("expected {expected} input bits, got {got}")]
    InputLength { expected: usize, got: usize },

    #[error("no Bell-half outcome recorded for pi/4 node {0}")]
    MissingAlpha(NodeId),

    #[error("no raw outcome recorded for node {0}")]
    MissingOutcome(NodeId),

    #[error("branch enumeration needs {0} branching measurements (limit 12)")]
    BranchLimit(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("coupling map is not connected; cannot route")]
    Unroutable,

    #[error("invalid coupling map: {0}")]
    Coupling(String),

    #[error("invalid placement: {0}")]
    Placement(String),

    #[error("invalid circuit: {0}")]
    Circuit(String),

    #[error("equivalence checking is limited to 10 wires, got {0}")]
    TooManyWires(usize),

    #[error("mask position {index} is out of range for {width}-bit outcome strings")]
    MaskIndex { index: usize, width: usize },

    #[error("probability {name} = {value} is outside [0, 1]")]
    Probability { name: String, value: f64 },

    #[error("table shape mismatch: {0}")]
    Shape(String),

    #[error("invalid experiment configuration: {0}")]
    Config(String),

    #[error("report serialisation failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
