//! Lowering of every gate kind to CNOT plus single-qubit gates.
//!
//! The lowering is exact, global phase included:
//!
//! * `ControlledUnitary` on `m > 1` targets is reduced to identity by Givens
//!   rotations between Gray-code neighbours, so every two-level factor is a
//!   multi-controlled single-qubit gate on the one bit where the neighbours
//!   differ. A single diagonal phase is left on the last Gray position.
//! * A multi-controlled single-qubit gate `C^n(W)` is split recursively with
//!   `W = V²` into `C(V)`, `C^{n-1}(X)`, `C(V†)`, `C^{n-1}(X)`, `C^{n-1}(V)`.
//! * `C(W)` uses the Euler form `W = e^{iα} A X B X C` with `ABC = I`.
//! * `UniformlyControlledRy` with `k` controls becomes `2^k` Ry rotations
//!   interleaved with `2^k` CNOTs following the Gray code.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{self, is_identity2, max_abs_diff2, sqrt_unitary, zyz_decompose, Mat2};
use super::{Circuit, Control, Gate};

/// Single-qubit factors closer than this to identity are dropped.
const IDENTITY_TOL: f64 = 1e-13;

pub fn lower_to_basis(circuit: &Circuit) -> Circuit {
    let mut out = Circuit::new(circuit.num_qubits()).expect("source circuit has qubits");
    for gate in circuit.gates() {
        lower_gate(&mut out, gate);
    }
    out
}

fn lower_gate(out: &mut Circuit, gate: &Gate) {
    match gate {
        Gate::SingleQubit { .. } | Gate::Cnot { .. } => out.push_unchecked(gate.clone()),
        Gate::ControlledUnitary {
            controls,
            targets,
            u,
        } => {
            if targets.len() == 1 {
                let w = Mat2::new(u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
                multi_controlled(out, controls, targets[0], &w);
            } else {
                controlled_multi_target(out, controls, targets, u);
            }
        }
        Gate::UniformlyControlledRy {
            controls,
            target,
            angles,
        } => {
            uniformly_controlled_ry(out, controls, *target, angles);
        }
    }
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Givens reduction of `u` in Gray-code order.
fn controlled_multi_target(
    out: &mut Circuit,
    controls: &[Control],
    targets: &[usize],
    u: &DMatrix<Complex64>,
) {
    let dim = u.nrows();
    let mut a = DMatrix::from_fn(dim, dim, |r, c| u[(gray(r), gray(c))]);

    // Each entry is (upper Gray position, 2×2 factor G); G_K ⋯ G_1 · A = D.
    let mut factors: Vec<(usize, Mat2)> = Vec::new();
    for col in 0..dim - 1 {
        for row in (col + 1..dim).rev() {
            let x = a[(row - 1, col)];
            let y = a[(row, col)];
            let fixes_diagonal = row - 1 == col;
            if y.norm() == 0.0 && !fixes_diagonal {
                continue;
            }
            let nrm = (x.norm_sqr() + y.norm_sqr()).sqrt();
            if nrm == 0.0 {
                continue;
            }
            let g = Mat2::new(x.conj() / nrm, y.conj() / nrm, -y / nrm, x / nrm);
            for c in 0..dim {
                let (p, q) = (a[(row - 1, c)], a[(row, c)]);
                a[(row - 1, c)] = g[(0, 0)] * p + g[(0, 1)] * q;
                a[(row, c)] = g[(1, 0)] * p + g[(1, 1)] * q;
            }
            if !is_identity2(&g, IDENTITY_TOL) {
                factors.push((row - 1, g));
            }
        }
    }

    // U = P^T · G_1† ⋯ G_K† · D · P; in time order D runs first.
    let last_phase = a[(dim - 1, dim - 1)].arg();
    if last_phase.abs() > IDENTITY_TOL {
        let index = gray(dim - 1);
        let w = Mat2::new(
            Complex64::from_polar(1.0, last_phase),
            matrix::ZERO,
            matrix::ZERO,
            matrix::ONE,
        );
        two_level(out, controls, targets, index, 0, &w);
    }
    for (pos, g) in factors.iter().rev() {
        let (s, t) = (gray(*pos), gray(pos + 1));
        let bit = (s ^ t).trailing_zeros() as usize;
        let g_dag = g.adjoint();
        // g acts on (|s⟩, |t⟩); re-express it on (bit = 0, bit = 1).
        let w = if s >> bit & 1 == 0 {
            g_dag
        } else {
            let x = matrix::pauli_x();
            x * g_dag * x
        };
        two_level(out, controls, targets, s, bit, &w);
    }
}

/// `w` on target bit `bit`, conditioned on the other target bits matching
/// `index` and on the outer `controls`.
fn two_level(
    out: &mut Circuit,
    controls: &[Control],
    targets: &[usize],
    index: usize,
    bit: usize,
    w: &Mat2,
) {
    let mut all = controls.to_vec();
    for (i, &q) in targets.iter().enumerate() {
        if i != bit {
            all.push(Control {
                qubit: q,
                on_one: index >> i & 1 == 1,
            });
        }
    }
    multi_controlled(out, &all, targets[bit], w);
}

/// `C^n(w)` with arbitrary control polarities.
fn multi_controlled(out: &mut Circuit, controls: &[Control], target: usize, w: &Mat2) {
    let flipped: Vec<usize> = controls
        .iter()
        .filter(|c| !c.on_one)
        .map(|c| c.qubit)
        .collect();
    for &q in &flipped {
        out.push_unchecked(Gate::x(q));
    }
    let qubits: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
    positive_controlled(out, &qubits, target, w);
    for &q in &flipped {
        out.push_unchecked(Gate::x(q));
    }
}

fn positive_controlled(out: &mut Circuit, controls: &[usize], target: usize, w: &Mat2) {
    if is_identity2(w, IDENTITY_TOL) {
        return;
    }
    match controls {
        [] => out.push_unchecked(Gate::single(target, *w)),
        [c] => singly_controlled(out, *c, target, w),
        [rest @ .., last] => {
            let v = sqrt_unitary(w);
            let x = matrix::pauli_x();
            singly_controlled(out, *last, target, &v);
            positive_controlled(out, rest, *last, &x);
            singly_controlled(out, *last, target, &v.adjoint());
            positive_controlled(out, rest, *last, &x);
            positive_controlled(out, rest, target, &v);
        }
    }
}

fn singly_controlled(out: &mut Circuit, control: usize, target: usize, w: &Mat2) {
    if is_identity2(w, IDENTITY_TOL) {
        return;
    }
    if max_abs_diff2(w, &matrix::pauli_x()) <= IDENTITY_TOL {
        out.push_unchecked(Gate::cnot(control, target));
        return;
    }
    let e = zyz_decompose(w);
    let a = matrix::rz(e.beta) * matrix::ry(e.gamma / 2.0);
    let b = matrix::ry(-e.gamma / 2.0) * matrix::rz(-(e.delta + e.beta) / 2.0);
    let c = matrix::rz((e.delta - e.beta) / 2.0);

    push_if_nontrivial(out, target, c);
    out.push_unchecked(Gate::cnot(control, target));
    push_if_nontrivial(out, target, b);
    out.push_unchecked(Gate::cnot(control, target));
    push_if_nontrivial(out, target, a);
    push_if_nontrivial(out, control, matrix::phase(e.alpha));
}

fn push_if_nontrivial(out: &mut Circuit, target: usize, u: Mat2) {
    if !is_identity2(&u, IDENTITY_TOL) {
        out.push_unchecked(Gate::single(target, u));
    }
}

fn uniformly_controlled_ry(out: &mut Circuit, controls: &[usize], target: usize, angles: &[f64]) {
    if controls.is_empty() {
        push_if_nontrivial(out, target, matrix::ry(angles[0]));
        return;
    }
    let len = angles.len();
    let scale = 1.0 / len as f64;
    for i in 0..len {
        let g = gray(i);
        let theta: f64 = angles
            .iter()
            .enumerate()
            .map(|(x, a)| {
                if (g & x).count_ones() & 1 == 0 {
                    *a
                } else {
                    -*a
                }
            })
            .sum::<f64>()
            * scale;
        push_if_nontrivial(out, target, matrix::ry(theta));
        let flip = (g ^ gray((i + 1) % len)).trailing_zeros() as usize;
        out.push_unchecked(Gate::cnot(controls[flip], target));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::matrix::max_abs_diff;
    use crate::qsim::matrix::testing::{random_unitary, random_unitary2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn assert_equivalent(circuit: &Circuit) -> Circuit {
        let lowered = lower_to_basis(circuit);
        assert!(lowered.is_lowered());
        let err = max_abs_diff(&circuit.unitary(), &lowered.unitary());
        assert!(err <= 1e-8, "lowering error {err:e} for {circuit:?}");
        lowered
    }

    #[test]
    fn cnot_is_unchanged() {
        let c = Circuit::from_gates(2, vec![Gate::cnot(0, 1)]).unwrap();
        assert_eq!(lower_to_basis(&c), c);
    }

    #[test]
    fn controlled_ry_uses_two_cnots() {
        let u = matrix::to_dmatrix(&matrix::ry(std::f64::consts::FRAC_PI_2));
        let c = Circuit::from_gates(2, vec![Gate::controlled(vec![Control::one(1)], vec![0], u)])
            .unwrap();
        let lowered = assert_equivalent(&c);
        assert_eq!(lowered.cnot_count(), 2);
        assert_eq!(lowered.len(), 4);
        let quarter = std::f64::consts::FRAC_PI_4;
        let ry_angles: Vec<f64> = lowered
            .gates()
            .iter()
            .filter_map(|g| match g {
                Gate::SingleQubit { u, .. } => Some(2.0 * u[(1, 0)].re.atan2(u[(0, 0)].re)),
                _ => None,
            })
            .collect();
        assert_eq!(ry_angles.len(), 2);
        assert!((ry_angles[0] + quarter).abs() < 1e-12);
        assert!((ry_angles[1] - quarter).abs() < 1e-12);
    }

    #[test]
    fn ucry_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..3 {
            let angles: Vec<f64> = (0..1 << k).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let controls: Vec<usize> = (1..=k).collect();
            let c = Circuit::from_gates(k + 1, vec![Gate::ucry(controls, 0, angles)]).unwrap();
            let lowered = assert_equivalent(&c);
            if k > 0 {
                assert_eq!(lowered.cnot_count(), 1 << k);
            }
        }
    }

    #[test]
    fn multi_controlled_single_qubit() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 0..3 {
            for _ in 0..5 {
                let w = random_unitary2(&mut rng);
                let controls: Vec<Control> = (1..=n)
                    .map(|q| Control {
                        qubit: q,
                        on_one: rng.gen(),
                    })
                    .collect();
                let c = Circuit::from_gates(
                    n + 1,
                    vec![Gate::controlled(controls, vec![0], matrix::to_dmatrix(&w))],
                )
                .unwrap();
                assert_equivalent(&c);
            }
        }
    }

    #[test]
    fn random_three_qubit_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let u = random_unitary(&mut rng, 8);
            let c =
                Circuit::from_gates(3, vec![Gate::controlled(vec![], vec![2, 0, 1], u)]).unwrap();
            assert_equivalent(&c);
        }
    }

    #[test]
    fn controlled_two_target_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10 {
            let u = random_unitary(&mut rng, 4);
            let ctrl = Control {
                qubit: 1,
                on_one: rng.gen(),
            };
            let c =
                Circuit::from_gates(3, vec![Gate::controlled(vec![ctrl], vec![2, 0], u)]).unwrap();
            assert_equivalent(&c);
        }
    }

    #[test]
    fn diagonal_and_permutation_unitaries() {
        let mut diag = DMatrix::zeros(4, 4);
        for i in 0..4 {
            diag[(i, i)] = Complex64::from_polar(1.0, 0.3 * i as f64 + 0.1);
        }
        let mut perm = DMatrix::zeros(4, 4);
        for (r, c) in [(0, 3), (1, 0), (2, 1), (3, 2)] {
            perm[(r, c)] = matrix::ONE;
        }
        for u in [diag, perm, DMatrix::identity(4, 4)] {
            let c = Circuit::from_gates(2, vec![Gate::controlled(vec![], vec![0, 1], u)]).unwrap();
            assert_equivalent(&c);
        }
    }
}
