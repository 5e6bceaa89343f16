use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use super::{lower_to_basis, Circuit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    pub width: usize,
    /// Longest chain of basis gates where consecutive gates share a qubit.
    pub depth: usize,
    pub cnot_count: usize,
}

/// Width, depth and CNOT count of the circuit after lowering to the
/// CNOT + single-qubit basis. Already-lowered circuits are measured as is.
pub fn metrics(circuit: &Circuit) -> CircuitMetrics {
    let lowered = if circuit.is_lowered() {
        Cow::Borrowed(circuit)
    } else {
        Cow::Owned(lower_to_basis(circuit))
    };

    let mut level = vec![0usize; lowered.num_qubits()];
    for gate in lowered.gates() {
        let qubits = gate.qubits();
        let next = qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for q in qubits {
            level[q] = next;
        }
    }
    CircuitMetrics {
        width: lowered.num_qubits(),
        depth: level.into_iter().max().unwrap_or(0),
        cnot_count: lowered.cnot_count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Gate;

    #[test]
    fn empty_circuit() {
        let m = metrics(&Circuit::new(3).unwrap());
        assert_eq!(
            m,
            CircuitMetrics {
                width: 3,
                depth: 0,
                cnot_count: 0
            }
        );
    }

    #[test]
    fn parallel_cnots() {
        let c = Circuit::from_gates(4, vec![Gate::cnot(0, 1), Gate::cnot(2, 3)]).unwrap();
        let m = metrics(&c);
        assert_eq!((m.depth, m.cnot_count), (1, 2));
    }

    #[test]
    fn chained_gates() {
        let c = Circuit::from_gates(
            3,
            vec![Gate::h(0), Gate::cnot(0, 1), Gate::cnot(1, 2), Gate::h(0)],
        )
        .unwrap();
        assert_eq!(metrics(&c).depth, 3);
    }
}
