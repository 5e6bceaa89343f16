//! Gate-level statevector simulator.
//!
//! Amplitudes are exact complex doubles and qubit 0 is the least significant
//! bit of every amplitude index. Circuits may hold high-level gates
//! (multi-qubit controlled unitaries, uniformly-controlled Ry); the simulator
//! applies those directly, and [`lower_to_basis`] rewrites them into CNOT and
//! single-qubit gates for gate accounting.

mod circuit;
mod gate;
mod lower;
pub mod matrix;
mod metrics;
mod prepare;
mod state;
mod text;

pub use circuit::Circuit;
pub use gate::{Control, Gate, UNITARITY_TOL};
pub use lower::lower_to_basis;
pub use metrics::{metrics, CircuitMetrics};
pub use prepare::prepare_state;
pub use state::{apply_circuit, PostSelection, StateVector, MIN_OUTCOME_PROBABILITY, NORM_TOL};
pub use text::{dump_circuit, parse_circuit};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("circuit must have at least one qubit")]
    NoQubits,
    #[error("dimension mismatch: expected {expected} qubits, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("qubit {0} used more than once in a gate")]
    DuplicateQubit(usize),
    #[error("controlled unitary has no targets")]
    EmptyTargets,
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    MatrixShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("expected {expected} rotation angles, got {got}")]
    AngleCount { expected: usize, got: usize },
    #[error("rotation angle {0} is not finite")]
    NonFiniteAngle(f64),
    #[error("vector length {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("vector is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("outcome {} on qubit {qubit} has zero probability", u8::from(*outcome))]
    ZeroProbability { qubit: usize, outcome: bool },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
