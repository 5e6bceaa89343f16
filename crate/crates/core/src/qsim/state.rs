use num_complex::Complex64;

use super::matrix::{self, Mat2, ZERO};
use super::{Circuit, Gate, SimError};

/// Norm tolerance for states handed to the simulator.
pub const NORM_TOL: f64 = 1e-9;

/// Smallest outcome probability [`StateVector::post_select`] will renormalize.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-24;

/// A pure state of `n` qubits as `2^n` complex amplitudes.
///
/// Qubit 0 is the least significant bit of the amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostSelection {
    pub state: StateVector,
    /// Probability of the selected outcome before collapse.
    pub probability: f64,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Self {
        StateVector::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[index] = matrix::ONE;
        StateVector { num_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo(len));
        }
        let state = StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm_sqr();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(SimError::NotNormalized { norm_sqr: norm });
        }
        Ok(state)
    }

    pub fn from_real(values: &[f64]) -> Result<Self, SimError> {
        StateVector::from_amplitudes(values.iter().map(|v| Complex64::new(*v, 0.0)).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Probability that measuring `qubit` yields `outcome`.
    pub fn probability(&self, qubit: usize, outcome: bool) -> f64 {
        let bit = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & bit != 0) == outcome)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Applies `circuit` gate by gate.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(SimError::DimensionMismatch {
                expected: circuit.num_qubits(),
                got: self.num_qubits,
            });
        }
        self.apply_circuit_unchecked(circuit);
        Ok(())
    }

    pub(crate) fn apply_circuit_unchecked(&mut self, circuit: &Circuit) {
        for gate in circuit.gates() {
            self.apply_gate(gate);
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match gate {
            Gate::SingleQubit { target, u } => self.apply_single(*target, u, 0, 0),
            Gate::Cnot { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            Gate::ControlledUnitary {
                controls,
                targets,
                u,
            } => {
                let (mask, value) = control_mask(controls.iter().map(|c| (c.qubit, c.on_one)));
                if targets.len() == 1 {
                    let u2 = Mat2::new(u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
                    self.apply_single(targets[0], &u2, mask, value);
                    return;
                }
                let offsets = index_offsets(targets);
                let target_mask: usize = targets.iter().map(|t| 1usize << t).sum();
                let dim = offsets.len();
                let mut buf = vec![ZERO; dim];
                for base in 0..self.amps.len() {
                    if base & target_mask != 0 || base & mask != value {
                        continue;
                    }
                    for (k, off) in offsets.iter().enumerate() {
                        buf[k] = self.amps[base | off];
                    }
                    for (r, off) in offsets.iter().enumerate() {
                        let mut acc = ZERO;
                        for (k, b) in buf.iter().enumerate() {
                            acc += u[(r, k)] * b;
                        }
                        self.amps[base | off] = acc;
                    }
                }
            }
            Gate::UniformlyControlledRy {
                controls,
                target,
                angles,
            } => {
                let t = 1usize << target;
                let rotations: Vec<(f64, f64)> =
                    angles.iter().map(|a| (a / 2.0).sin_cos()).collect();
                for i in 0..self.amps.len() {
                    if i & t != 0 {
                        continue;
                    }
                    let k = controls
                        .iter()
                        .enumerate()
                        .fold(0usize, |acc, (bit, q)| acc | (((i >> q) & 1) << bit));
                    let (s, co) = rotations[k];
                    let (a0, a1) = (self.amps[i], self.amps[i | t]);
                    self.amps[i] = a0 * co - a1 * s;
                    self.amps[i | t] = a0 * s + a1 * co;
                }
            }
        }
    }

    fn apply_single(&mut self, target: usize, u: &Mat2, mask: usize, value: usize) {
        let t = 1usize << target;
        let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        for i in 0..self.amps.len() {
            if i & t != 0 || i & mask != value {
                continue;
            }
            let (a0, a1) = (self.amps[i], self.amps[i | t]);
            self.amps[i] = u00 * a0 + u01 * a1;
            self.amps[i | t] = u10 * a0 + u11 * a1;
        }
    }

    /// Conditions the state on measuring `outcome` on `qubit`.
    pub fn post_select(&self, qubit: usize, outcome: bool) -> Result<PostSelection, SimError> {
        if qubit >= self.num_qubits {
            return Err(SimError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        let probability = self.probability(qubit, outcome);
        if !(probability > MIN_OUTCOME_PROBABILITY) {
            return Err(SimError::ZeroProbability { qubit, outcome });
        }
        let scale = 1.0 / probability.sqrt();
        let bit = 1usize << qubit;
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if (i & bit != 0) == outcome {
                    a * scale
                } else {
                    ZERO
                }
            })
            .collect();
        Ok(PostSelection {
            state: StateVector {
                num_qubits: self.num_qubits,
                amps,
            },
            probability,
        })
    }
}

/// `apply_circuit` as a value-returning operation.
pub fn apply_circuit(mut state: StateVector, circuit: &Circuit) -> Result<StateVector, SimError> {
    state.apply_circuit(circuit)?;
    Ok(state)
}

fn control_mask(controls: impl Iterator<Item = (usize, bool)>) -> (usize, usize) {
    controls.fold((0, 0), |(mask, value), (q, on)| {
        (mask | 1 << q, if on { value | 1 << q } else { value })
    })
}

/// `offsets[k]` is the amplitude-index offset for sub-index `k` over `targets`.
fn index_offsets(targets: &[usize]) -> Vec<usize> {
    (0..1usize << targets.len())
        .map(|k| {
            targets
                .iter()
                .enumerate()
                .filter(|(bit, _)| k >> bit & 1 == 1)
                .map(|(_, q)| 1usize << q)
                .sum()
        })
        .collect()
}
