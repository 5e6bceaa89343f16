use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{self, to_dmatrix, unitarity_deviation, Mat2};
use super::SimError;

/// Unitarity tolerance applied when a gate is added to a circuit.
pub const UNITARITY_TOL: f64 = 1e-10;

/// A control qubit and the basis value it must hold for the gate to act.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub on_one: bool,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Control {
            qubit,
            on_one: true,
        }
    }

    pub fn zero(qubit: usize) -> Self {
        Control {
            qubit,
            on_one: false,
        }
    }
}

/// A gate over the qubits of a [`Circuit`](super::Circuit).
///
/// Multi-qubit matrices index their target list little-endian: `targets[0]`
/// is the least significant bit of the row/column index. For
/// `UniformlyControlledRy`, bit `i` of the angle index is the value of
/// `controls[i]`.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    SingleQubit {
        target: usize,
        u: Mat2,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    ControlledUnitary {
        controls: Vec<Control>,
        targets: Vec<usize>,
        u: DMatrix<Complex64>,
    },
    UniformlyControlledRy {
        controls: Vec<usize>,
        target: usize,
        angles: Vec<f64>,
    },
}

impl Gate {
    pub fn single(target: usize, u: Mat2) -> Self {
        Gate::SingleQubit { target, u }
    }

    pub fn h(target: usize) -> Self {
        Gate::single(target, matrix::hadamard())
    }

    pub fn x(target: usize) -> Self {
        Gate::single(target, matrix::pauli_x())
    }

    pub fn ry(target: usize, theta: f64) -> Self {
        Gate::single(target, matrix::ry(theta))
    }

    pub fn rz(target: usize, theta: f64) -> Self {
        Gate::single(target, matrix::rz(theta))
    }

    pub fn phase(target: usize, phi: f64) -> Self {
        Gate::single(target, matrix::phase(phi))
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn controlled(controls: Vec<Control>, targets: Vec<usize>, u: DMatrix<Complex64>) -> Self {
        Gate::ControlledUnitary {
            controls,
            targets,
            u,
        }
    }

    /// Single-control phase `diag(1, e^{iφ})` on `target`.
    pub fn controlled_phase(control: usize, target: usize, phi: f64) -> Self {
        Gate::controlled(
            vec![Control::one(control)],
            vec![target],
            to_dmatrix(&matrix::phase(phi)),
        )
    }

    pub fn ucry(controls: Vec<usize>, target: usize, angles: Vec<f64>) -> Self {
        Gate::UniformlyControlledRy {
            controls,
            target,
            angles,
        }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::SingleQubit { target, .. } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::ControlledUnitary {
                controls, targets, ..
            } => controls
                .iter()
                .map(|c| c.qubit)
                .chain(targets.iter().copied())
                .collect(),
            Gate::UniformlyControlledRy {
                controls, target, ..
            } => controls.iter().copied().chain([*target]).collect(),
        }
    }

    pub fn is_basis(&self) -> bool {
        matches!(self, Gate::SingleQubit { .. } | Gate::Cnot { .. })
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::SingleQubit { target, u } => Gate::SingleQubit {
                target: *target,
                u: u.adjoint(),
            },
            Gate::Cnot { .. } => self.clone(),
            Gate::ControlledUnitary {
                controls,
                targets,
                u,
            } => Gate::ControlledUnitary {
                controls: controls.clone(),
                targets: targets.clone(),
                u: u.adjoint(),
            },
            Gate::UniformlyControlledRy {
                controls,
                target,
                angles,
            } => Gate::UniformlyControlledRy {
                controls: controls.clone(),
                target: *target,
                angles: angles.iter().map(|a| -a).collect(),
            },
        }
    }

    pub(crate) fn validate(&self, num_qubits: usize) -> Result<(), SimError> {
        let qubits = self.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= num_qubits {
                return Err(SimError::QubitOutOfRange {
                    qubit: q,
                    num_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(SimError::DuplicateQubit(q));
            }
        }
        match self {
            Gate::SingleQubit { u, .. } => check_unitary(&to_dmatrix(u)),
            Gate::Cnot { .. } => Ok(()),
            Gate::ControlledUnitary { targets, u, .. } => {
                if targets.is_empty() {
                    return Err(SimError::EmptyTargets);
                }
                let dim = 1usize << targets.len();
                if u.shape() != (dim, dim) {
                    return Err(SimError::MatrixShape {
                        expected: dim,
                        rows: u.nrows(),
                        cols: u.ncols(),
                    });
                }
                check_unitary(u)
            }
            Gate::UniformlyControlledRy {
                controls, angles, ..
            } => {
                let expected = 1usize << controls.len();
                if angles.len() != expected {
                    return Err(SimError::AngleCount {
                        expected,
                        got: angles.len(),
                    });
                }
                if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
                    return Err(SimError::NonFiniteAngle(*bad));
                }
                Ok(())
            }
        }
    }
}

fn check_unitary(u: &DMatrix<Complex64>) -> Result<(), SimError> {
    let deviation = unitarity_deviation(u);
    // NaN entries fail this comparison as well.
    if deviation <= UNITARITY_TOL {
        Ok(())
    } else {
        Err(SimError::NotUnitary { deviation })
    }
}
