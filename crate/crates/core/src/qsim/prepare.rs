use super::state::NORM_TOL;
use super::{Circuit, Gate, SimError};

/// Builds a circuit taking `|0…0⟩` to the real unit vector `target`.
///
/// The construction walks a binary tree from the most significant qubit down.
/// Level `ℓ` splits each of the `2^ℓ` blocks into halves with a
/// uniformly-controlled Ry on qubit `β−1−ℓ`, controlled by the `ℓ` qubits
/// above it. Inner levels rotate by the ratio of half-block norms; the last
/// level uses the signed amplitudes, so negative entries come out exactly.
/// Levels whose angles are all zero emit no gate.
pub fn prepare_state(target: &[f64]) -> Result<Circuit, SimError> {
    let len = target.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(SimError::NotPowerOfTwo(len));
    }
    let norm_sqr: f64 = target.iter().map(|v| v * v).sum();
    if !((norm_sqr - 1.0).abs() <= NORM_TOL) {
        return Err(SimError::NotNormalized { norm_sqr });
    }

    let num_qubits = len.trailing_zeros() as usize;
    let mut circuit = Circuit::new(num_qubits)?;

    for level in 0..num_qubits {
        let target_qubit = num_qubits - 1 - level;
        let controls: Vec<usize> = (target_qubit + 1..num_qubits).collect();
        let block = len >> level;
        let half = block / 2;
        let last = level + 1 == num_qubits;

        let angles: Vec<f64> = (0..1usize << level)
            .map(|k| {
                let start = k * block;
                // The lower half has the target qubit at 0; indices are
                // contiguous because the target is the block's top bit.
                let (lo, hi) = target[start..start + block].split_at(half);
                if last {
                    2.0 * hi[0].atan2(lo[0])
                } else {
                    2.0 * l2(hi).atan2(l2(lo))
                }
            })
            .collect();

        if angles.iter().all(|a| *a == 0.0) {
            continue;
        }
        let gate = if controls.is_empty() {
            Gate::ry(target_qubit, angles[0])
        } else {
            Gate::ucry(controls, target_qubit, angles)
        };
        circuit.push_unchecked(gate);
    }
    Ok(circuit)
}

fn l2(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::StateVector;

    fn round_trip(v: &[f64]) -> f64 {
        let circuit = prepare_state(v).unwrap();
        let mut s = StateVector::zero(circuit.num_qubits());
        s.apply_circuit(&circuit).unwrap();
        s.amplitudes()
            .iter()
            .zip(v)
            .map(|(a, t)| (a - t).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn basis_zero_needs_no_gates() {
        let circuit = prepare_state(&[1.0, 0.0]).unwrap();
        assert!(circuit.is_empty());
    }

    #[test]
    fn uniform_superposition() {
        assert!(round_trip(&[0.5; 4]) < 1e-15);
    }

    #[test]
    fn signed_entries() {
        let v = [0.1, -0.3, 0.5, -0.1, 0.0, 0.7, -0.2, 0.3];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let v: Vec<f64> = v.iter().map(|x| x / n).collect();
        assert!(round_trip(&v) < 1e-12);
    }

    #[test]
    fn sparse_targets() {
        assert!(round_trip(&[0.0, 0.0, 0.0, 1.0]) < 1e-15);
        assert!(round_trip(&[0.0, -1.0]) < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            prepare_state(&[1.0, 0.0, 0.0]),
            Err(SimError::NotPowerOfTwo(3))
        ));
        assert!(matches!(
            prepare_state(&[0.5, 0.5]),
            Err(SimError::NotNormalized { .. })
        ));
    }
}
