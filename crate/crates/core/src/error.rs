use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid register layout: {0}")]
    Registers(String),

    #[error("gate {kind} expects {expected} qubits, got {got}")]
    Arity {
        kind: String,
        expected: usize,
        got: usize,
    },

    #[error("qubit {0} appears more than once in a gate")]
    DuplicateQubit(usize),

    #[error("qubit index {index} out of range for {num_qubits}-qubit circuit")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("qubit {0} was already measured")]
    AfterMeasure(usize),

    #[error("circuit contains non-unitary operation {0}")]
    NonUnitary(String),

    #[error("{what} limited to {limit} qubits, circuit has {got}")]
    TooManyQubits {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("invalid QROM spec: {0}")]
    Spec(String),

    #[error("invalid partition config: {0}")]
    Config(String),

    #[error("invalid coupling map: {0}")]
    Coupling(String),

    #[error("routing failed: {0}")]
    Routing(String),

    #[error("V-chain decomposition of MCX({controls}) needs {needed} clean ancilla, strategy provides {available}")]
    InsufficientAncilla {
        controls: usize,
        needed: usize,
        available: usize,
    },

    #[error("gate {0} is not in the {{rz, x, sx, cx, id}} basis")]
    NotBasis(String),

    #[error("reset of qubit {0} is nondeterministic; use shot-based simulation")]
    NondeterministicReset(usize),

    #[error("simulation error: {0}")]
    Simulation(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
