//! Shared inputs for the criterion benchmarks.

use qpf_core::grid::{build_reduced_system, wscc9, ReducedSystem};
use qpf_core::hhl::{hhl_program, HhlConfig};
use qpf_core::qsim::Circuit;

pub fn wscc9_system() -> ReducedSystem {
    build_reduced_system(&wscc9()).expect("fixture is valid")
}

/// The unlowered HHL circuit for wscc9 with a clock of `alpha` qubits.
pub fn wscc9_circuit(alpha: usize) -> Circuit {
    hhl_program(&wscc9_system(), &HhlConfig::with_alpha(alpha))
        .expect("fixture is solvable")
        .circuit
}
