//! Plain-text circuit dump, one gate per line.
//!
//! ```text
//! # comment
//! QUBITS <n>
//! U    <t> []           <re00> <im00> <re01> <im01> <re10> <im10> <re11> <im11>
//! CX   <t> [<c>]
//! CU   <t0,t1,..> [<c0>,!<c1>,..] <re im pairs of the 2^m × 2^m matrix, row-major>
//! UCRY <t> [<c0>,<c1>,..] <2^k angles>
//! ```
//!
//! The first non-comment line must be `QUBITS`. A control written `!q` fires
//! on `|0⟩`. Lists use commas without spaces; `[]` is an empty control list.
//! Numbers are written in shortest round-trip form, so `parse(dump(c)) == c`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::Mat2;
use super::{Circuit, Control, Gate, SimError};

pub fn dump_circuit(circuit: &Circuit) -> String {
    let mut out = format!("QUBITS {}\n", circuit.num_qubits());
    for gate in circuit.gates() {
        match gate {
            Gate::SingleQubit { target, u } => {
                write!(out, "U {target} []").unwrap();
                write_complex(
                    &mut out,
                    u.iter().copied().collect::<Vec<_>>().as_slice(),
                    true,
                );
            }
            Gate::Cnot { control, target } => {
                write!(out, "CX {target} [{control}]").unwrap();
            }
            Gate::ControlledUnitary {
                controls,
                targets,
                u,
            } => {
                let ctrls: Vec<String> = controls
                    .iter()
                    .map(|c| {
                        if c.on_one {
                            c.qubit.to_string()
                        } else {
                            format!("!{}", c.qubit)
                        }
                    })
                    .collect();
                write!(out, "CU {} [{}]", join(targets), ctrls.join(",")).unwrap();
                let row_major: Vec<Complex64> = u.transpose().iter().copied().collect();
                write_complex(&mut out, &row_major, false);
            }
            Gate::UniformlyControlledRy {
                controls,
                target,
                angles,
            } => {
                write!(out, "UCRY {target} [{}]", join(controls)).unwrap();
                for a in angles {
                    write!(out, " {a:?}").unwrap();
                }
            }
        }
        out.push('\n');
    }
    out
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes entries as `re im` pairs. `Mat2::iter` is column-major, so 2×2
/// matrices are transposed on the way out when `column_major` is set.
fn write_complex(out: &mut String, entries: &[Complex64], column_major: bool) {
    let ordered: Vec<Complex64> = if column_major {
        vec![entries[0], entries[2], entries[1], entries[3]]
    } else {
        entries.to_vec()
    };
    for z in ordered {
        write!(out, " {:?} {:?}", z.re, z.im).unwrap();
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit, SimError> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| SimError::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let op = fields.next().expect("non-empty line");

        let Some(circ) = circuit.as_mut() else {
            if op != "QUBITS" {
                return Err(err("expected QUBITS header".into()));
            }
            let n = fields
                .next()
                .ok_or_else(|| err("missing qubit count".into()))?
                .parse::<usize>()
                .map_err(|e| err(e.to_string()))?;
            if fields.next().is_some() {
                return Err(err("trailing fields after QUBITS".into()));
            }
            circuit = Some(Circuit::new(n)?);
            continue;
        };

        let targets = parse_list(fields.next().ok_or_else(|| err("missing targets".into()))?)
            .map_err(&err)?;
        let controls_field = fields
            .next()
            .ok_or_else(|| err("missing control list".into()))?;
        let controls = parse_controls(controls_field).map_err(&err)?;
        let params: Vec<f64> = fields
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| err(format!("bad number {f:?}: {e}")))
            })
            .collect::<Result<_, _>>()?;

        let single_target = || match targets.as_slice() {
            [t] => Ok(*t),
            _ => Err(err(format!("{op} takes exactly one target"))),
        };
        let gate = match op {
            "U" => {
                let t = single_target()?;
                if !controls.is_empty() {
                    return Err(err("U takes no controls".into()));
                }
                let z = complex_params(&params, 4).map_err(&err)?;
                Gate::single(t, Mat2::new(z[0], z[1], z[2], z[3]))
            }
            "CX" => {
                let t = single_target()?;
                match controls.as_slice() {
                    [c] if c.on_one && params.is_empty() => Gate::cnot(c.qubit, t),
                    _ => return Err(err("CX takes one positive control and no params".into())),
                }
            }
            "CU" => {
                if targets.is_empty() || targets.len() > 16 {
                    return Err(err("CU needs 1..=16 targets".into()));
                }
                let dim = 1usize << targets.len();
                let z = complex_params(&params, dim * dim).map_err(&err)?;
                Gate::controlled(controls, targets, DMatrix::from_row_slice(dim, dim, &z))
            }
            "UCRY" => {
                let t = single_target()?;
                if controls.iter().any(|c| !c.on_one) {
                    return Err(err("UCRY controls cannot be negated".into()));
                }
                Gate::ucry(controls.iter().map(|c| c.qubit).collect(), t, params)
            }
            other => return Err(err(format!("unknown gate {other:?}"))),
        };
        circ.push(gate)?;
    }
    circuit.ok_or(SimError::Parse {
        line: 0,
        message: "empty circuit text".into(),
    })
}

fn parse_list(field: &str) -> Result<Vec<usize>, String> {
    field
        .split(',')
        .map(|s| {
            s.parse::<usize>()
                .map_err(|e| format!("bad qubit {s:?}: {e}"))
        })
        .collect()
}

fn parse_controls(field: &str) -> Result<Vec<Control>, String> {
    let inner = field
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format!("control list must be bracketed, got {field:?}"))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            let (on_one, digits) = match s.strip_prefix('!') {
                Some(rest) => (false, rest),
                None => (true, s),
            };
            let qubit = digits
                .parse::<usize>()
                .map_err(|e| format!("bad control {s:?}: {e}"))?;
            Ok(Control { qubit, on_one })
        })
        .collect()
}

fn complex_params(params: &[f64], count: usize) -> Result<Vec<Complex64>, String> {
    if params.len() != 2 * count {
        return Err(format!(
            "expected {} numbers, got {}",
            2 * count,
            params.len()
        ));
    }
    Ok(params
        .chunks(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::matrix;

    fn sample() -> Circuit {
        let mut cu = DMatrix::zeros(4, 4);
        for (r, c) in [(0, 1), (1, 0), (2, 2), (3, 3)] {
            cu[(r, c)] = Complex64::new(0.0, 1.0);
        }
        Circuit::from_gates(
            4,
            vec![
                Gate::h(0),
                Gate::rz(3, 0.123456789),
                Gate::cnot(0, 2),
                Gate::controlled(vec![Control::one(3), Control::zero(0)], vec![1, 2], cu),
                Gate::ucry(vec![1, 2], 0, vec![0.1, -0.2, 0.3, 1e-300]),
                Gate::controlled(vec![], vec![3], matrix::to_dmatrix(&matrix::pauli_x())),
            ],
        )
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let c = sample();
        let text = dump_circuit(&c);
        assert_eq!(parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# bell pair\n\nQUBITS 2\nU 0 [] 0.7071067811865476 0 0.7071067811865476 0 0.7071067811865476 0 -0.7071067811865476 0\nCX 1 [0] # entangle\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.gates()[1], Gate::cnot(0, 1));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_circuit("QUBITS 2\nCX 1 [0]\nFOO 1 []\n").unwrap_err();
        assert!(matches!(err, SimError::Parse { line: 3, .. }), "{err}");
        assert!(matches!(
            parse_circuit("CX 1 [0]\n"),
            Err(SimError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_circuit("QUBITS 2\nCX 5 [0]\n"),
            Err(SimError::QubitOutOfRange { qubit: 5, .. })
        ));
        assert!(matches!(
            parse_circuit("QUBITS 1\nU 0 [] 1 0 1 0 0 0 1 0\n"),
            Err(SimError::NotUnitary { .. })
        ));
    }
}
