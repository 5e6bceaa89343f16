//! DC power flow solved two ways: a direct Cholesky solve and a simulated
//! HHL circuit, plus the asymptotic cost models used to compare them.
//!
//! * [`grid`]: network model, reduced susceptance system, classical solve.
//! * [`qsim`]: statevector simulator, state preparation, lowering, metrics.
//! * [`hhl`]: phase estimation, reciprocal rotation, readout and fidelity.
//! * [`complexity`]: classical and quantum cost models and their crossover.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexity;
pub mod grid;
pub mod hhl;
pub mod qsim;

pub use nalgebra;
pub use num_complex;

pub use complexity::{ComplexityError, ComplexityParams, CrossoverReport, LogBase};
pub use grid::{GridError, Network, NetworkStats, ReducedSystem};
pub use hhl::{HhlConfig, HhlError, HhlResult, ScalingRule, SpectralScaling};
pub use qsim::{Circuit, CircuitMetrics, Gate, SimError, StateVector};
