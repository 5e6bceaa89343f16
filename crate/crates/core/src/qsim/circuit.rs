use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Gate, SimError, StateVector};

/// An ordered gate program over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self, SimError> {
        if num_qubits == 0 {
            return Err(SimError::NoQubits);
        }
        Ok(Circuit {
            num_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self, SimError> {
        let mut circuit = Circuit::new(num_qubits)?;
        for gate in gates {
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, SimError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Gates produced internally are valid by construction.
    pub(crate) fn push_unchecked(&mut self, gate: Gate) {
        debug_assert!(gate.validate(self.num_qubits).is_ok(), "{gate:?}");
        self.gates.push(gate);
    }

    /// Appends `other`, whose qubit `i` maps onto qubit `i` of `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self, SimError> {
        if other.num_qubits > self.num_qubits {
            return Err(SimError::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    /// The adjoint circuit: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        }
    }

    pub fn is_lowered(&self) -> bool {
        self.gates.iter().all(Gate::is_basis)
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot { .. }))
            .count()
    }

    /// Dense `2^n × 2^n` matrix of the whole circuit, built column by column.
    pub fn unitary(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.num_qubits;
        let mut out = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut state = StateVector::basis(self.num_qubits, col);
            state.apply_circuit_unchecked(self);
            for (row, amp) in state.amplitudes().iter().enumerate() {
                out[(row, col)] = *amp;
            }
        }
        out
    }
}
