use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{EigenDecomposition, SpectralScaling};
use crate::qsim::{Circuit, Control, Gate, SimError};

/// Qubit assignment for the HHL registers.
///
/// The solution register holds qubits `0..β`, the clock register
/// `β..β+α` (clock bit `k` on qubit `β + k`), and the ancilla sits on
/// qubit `β + α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    pub beta: usize,
    pub alpha: usize,
}

impl RegisterLayout {
    pub fn width(&self) -> usize {
        self.alpha + self.beta + 1
    }

    pub fn solution_qubits(&self) -> Vec<usize> {
        (0..self.beta).collect()
    }

    pub fn clock_qubits(&self) -> Vec<usize> {
        (self.beta..self.beta + self.alpha).collect()
    }

    pub fn ancilla(&self) -> usize {
        self.beta + self.alpha
    }
}

/// Quantum Fourier transform over `qubits`, where `qubits[i]` carries bit
/// `i` of the register integer: `|x⟩ → 2^{-a/2} Σ_y e^{2πi xy/2^a} |y⟩`.
pub fn qft(num_qubits: usize, qubits: &[usize]) -> Result<Circuit, SimError> {
    let mut circuit = Circuit::new(num_qubits)?;
    let a = qubits.len();
    for q in (0..a).rev() {
        circuit.push(Gate::h(qubits[q]))?;
        for lower in (0..q).rev() {
            let angle = TAU / (1u64 << (q - lower + 1)) as f64;
            circuit.push(Gate::controlled_phase(qubits[lower], qubits[q], angle))?;
        }
    }
    for i in 0..a / 2 {
        let (x, y) = (qubits[i], qubits[a - 1 - i]);
        circuit.push(Gate::cnot(x, y))?;
        circuit.push(Gate::cnot(y, x))?;
        circuit.push(Gate::cnot(x, y))?;
    }
    Ok(circuit)
}

/// `e^{iBτ} = V diag(e^{iλ_j τ}) V†`.
pub fn evolution_unitary(eig: &EigenDecomposition, tau: f64) -> DMatrix<Complex64> {
    let n = eig.dim();
    let v = eig.vectors.map(|x| Complex64::new(x, 0.0));
    let phases = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::from_polar(1.0, eig.lambdas[r] * tau)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    &v * phases * v.adjoint()
}

/// Phase estimation of `U = e^{iBt}`: Hadamards on the clock, controlled
/// `U^{2^k}` from clock bit `k`, then the inverse QFT on the clock.
pub fn build_qpe(
    eig: &EigenDecomposition,
    scaling: &SpectralScaling,
    layout: RegisterLayout,
) -> Result<Circuit, SimError> {
    let mut circuit = Circuit::new(layout.width())?;
    let clock = layout.clock_qubits();
    for &q in &clock {
        circuit.push(Gate::h(q))?;
    }
    for (k, &q) in clock.iter().enumerate() {
        let power = (1u64 << k) as f64;
        circuit.push(Gate::controlled(
            vec![Control::one(q)],
            layout.solution_qubits(),
            evolution_unitary(eig, scaling.t * power),
        ))?;
    }
    circuit.append(&qft(layout.width(), &clock)?.inverse())?;
    Ok(circuit)
}

/// Uniformly-controlled Ry on the ancilla writing amplitude `c / λ̃(m)` on
/// |1⟩ for every clock integer `m ≥ 1`; clock 0 is left unrotated.
pub fn build_reciprocal_rotation(scaling: &SpectralScaling, layout: RegisterLayout) -> Gate {
    let angles = (0..scaling.clock_size())
        .map(|m| 2.0 * scaling.reciprocal_amplitude(m).asin())
        .collect();
    Gate::ucry(layout.clock_qubits(), layout.ancilla(), angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hhl::scaling::with_grid_c;
    use crate::qsim::matrix::max_abs_diff;
    use crate::qsim::{lower_to_basis, StateVector};
    use nalgebra::DVector;

    fn diag_eig(values: &[f64]) -> EigenDecomposition {
        EigenDecomposition::of(&DMatrix::from_diagonal(&DVector::from_row_slice(values))).unwrap()
    }

    fn clock_distribution(state: &StateVector, layout: RegisterLayout) -> Vec<f64> {
        let mut dist = vec![0.0; 1 << layout.alpha];
        let mask = (1 << layout.alpha) - 1;
        for (i, a) in state.amplitudes().iter().enumerate() {
            dist[(i >> layout.beta) & mask] += a.norm_sqr();
        }
        dist
    }

    #[test]
    fn qft_matches_dft_matrix() {
        for a in 1..=4 {
            let qubits: Vec<usize> = (0..a).collect();
            let u = qft(a, &qubits).unwrap().unitary();
            let m = 1usize << a;
            let dft = DMatrix::from_fn(m, m, |y, x| {
                Complex64::from_polar(1.0 / (m as f64).sqrt(), TAU * (x * y) as f64 / m as f64)
            });
            assert!(max_abs_diff(&u, &dft) < 1e-12, "a = {a}");
        }
    }

    #[test]
    fn exact_phase_reads_out_deterministically() {
        // One solution qubit, 3 clock qubits, λ placed on clock integer 1.
        let layout = RegisterLayout { beta: 1, alpha: 3 };
        let eig = diag_eig(&[2.0, 4.0]);
        let scaling = with_grid_c(TAU / (8.0 * 2.0), 3);
        assert!((scaling.clock_position(2.0) - 1.0).abs() < 1e-12);

        let mut s = StateVector::zero(layout.width());
        s.apply_circuit(&build_qpe(&eig, &scaling, layout).unwrap())
            .unwrap();
        let dist = clock_distribution(&s, layout);
        assert!((dist[1] - 1.0).abs() < 1e-12, "{dist:?}");
    }

    #[test]
    fn two_exact_phases_give_two_atoms() {
        let layout = RegisterLayout { beta: 1, alpha: 3 };
        let eig = diag_eig(&[1.0, 3.0]);
        let scaling = with_grid_c(TAU / 8.0, 3);
        // |ψ⟩ = 0.6|0⟩ + 0.8|1⟩ in the eigenbasis of diag(1, 3).
        let mut prep = Circuit::new(layout.width()).unwrap();
        prep.push(Gate::ry(0, 2.0 * 0.8f64.atan2(0.6))).unwrap();
        prep.append(&build_qpe(&eig, &scaling, layout).unwrap())
            .unwrap();
        let mut s = StateVector::zero(layout.width());
        s.apply_circuit(&prep).unwrap();
        let dist = clock_distribution(&s, layout);
        for (m, p) in dist.iter().enumerate() {
            let expected = match m {
                1 => 0.36,
                3 => 0.64,
                _ => 0.0,
            };
            assert!((p - expected).abs() < 1e-12, "m={m}: {dist:?}");
        }
    }

    #[test]
    fn off_grid_phase_concentrates_near_neighbours() {
        // λ sits at clock position 2.5; the pinned atom matches 1 / (256 sin²(π/32)).
        let layout = RegisterLayout { beta: 1, alpha: 4 };
        let eig = diag_eig(&[2.5, 5.0]);
        let scaling = with_grid_c(TAU / 16.0, 4);
        let mut s = StateVector::zero(layout.width());
        s.apply_circuit(&build_qpe(&eig, &scaling, layout).unwrap())
            .unwrap();
        let dist = clock_distribution(&s, layout);
        let near = dist[2] + dist[3];
        assert!(near >= 0.4, "{dist:?}");
        assert!((dist[2] - 0.4065893317).abs() < 1e-9, "{}", dist[2]);
        assert!((dist[3] - dist[2]).abs() < 1e-12);
    }

    #[test]
    fn reciprocal_rotation_amplitudes() {
        let layout = RegisterLayout { beta: 1, alpha: 3 };
        let scaling = with_grid_c(TAU / 8.0 / 0.7, 3);
        let gate = build_reciprocal_rotation(&scaling, layout);
        let circuit = Circuit::from_gates(layout.width(), vec![gate]).unwrap();
        let u = lower_to_basis(&circuit).unitary();
        let anc = 1usize << layout.ancilla();
        for m in 0..8usize {
            let col = m << layout.beta;
            let amp = u[(col | anc, col)];
            let expected = if m == 0 {
                0.0
            } else {
                scaling.c / scaling.clock_eigenvalue(m)
            };
            assert!(
                (amp.re - expected).abs() < 1e-12 && amp.im.abs() < 1e-12,
                "m={m}"
            );
        }
        // λ̃ = c at m = 1: the ancilla flips completely.
        let col = 1 << layout.beta;
        assert!((u[(col | anc, col)].re - 1.0).abs() < 1e-12);
    }
}
