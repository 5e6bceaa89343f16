//! HHL linear-system solver on the simulated circuit.
//!
//! Pipeline for `B θ = p`: amplitude-encode `p/‖p‖`, phase-estimate
//! `e^{iBt}` into an α-qubit clock, rotate an ancilla by `arcsin(c/λ̃)`,
//! uncompute the phase estimation, post-select the ancilla on |1⟩ and read
//! the solution register with the clock projected onto |0⟩. The evolution
//! unitaries are exact (`V diag(e^{iλt}) V†`), so the only approximation left
//! is the finite clock.

mod circuits;
mod fidelity;
mod pipeline;
mod scaling;

pub use circuits::{build_qpe, build_reciprocal_rotation, evolution_unitary, qft, RegisterLayout};
pub use fidelity::{epsilon_from_fidelity, fidelity};
pub use pipeline::{
    build_hhl_circuit, hhl_program, run_hhl, solution_qubits, HhlConfig, HhlProgram, HhlResult,
    Readout, MIN_SUCCESS_PROBABILITY,
};
pub use scaling::{
    anchor_smallest, choose_scaling, EigenDecomposition, ScalingRule, SpectralScaling,
};

use thiserror::Error;

use crate::grid::GridError;
use crate::qsim::SimError;

pub const MAX_CLOCK_QUBITS: usize = 12;
pub const MAX_WIDTH: usize = 20;

#[derive(Debug, Error)]
pub enum HhlError {
    #[error("eigenvalue {0} is not positive")]
    NonPositiveEigenvalue(f64),
    #[error("clock size alpha = {0} is outside 1..={MAX_CLOCK_QUBITS}")]
    InvalidAlpha(usize),
    #[error("{0} override must be positive and finite, got {1}")]
    InvalidOverride(&'static str, f64),
    #[error("circuit width {0} exceeds {MAX_WIDTH} qubits")]
    TooWide(usize),
    #[error("post-selection probability {probability:e} is too small")]
    PostSelection { probability: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("fidelity {0} is outside [0, 1]")]
    FidelityOutOfRange(f64),
    #[error("system is empty")]
    EmptySystem,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
