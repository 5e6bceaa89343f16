use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::circuits::{build_qpe, build_reciprocal_rotation, RegisterLayout};
use super::scaling::with_grid_c;
use super::{fidelity, EigenDecomposition, HhlError, ScalingRule, SpectralScaling};
use crate::grid::{solve_dc, ReducedSystem};
use crate::qsim::{metrics, prepare_state, Circuit, CircuitMetrics, StateVector};

/// Post-selection probabilities below this signal an unusable scaling.
pub const MIN_SUCCESS_PROBABILITY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    /// Amplitudes read directly from the simulated state.
    #[default]
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HhlConfig {
    /// Clock register size α.
    pub alpha: usize,
    pub t_override: Option<f64>,
    pub c_override: Option<f64>,
    #[serde(default)]
    pub scaling: ScalingRule,
    #[serde(default)]
    pub readout: Readout,
}

impl Default for HhlConfig {
    fn default() -> Self {
        HhlConfig {
            alpha: 5,
            t_override: None,
            c_override: None,
            scaling: ScalingRule::default(),
            readout: Readout::Exact,
        }
    }
}

impl HhlConfig {
    pub fn with_alpha(alpha: usize) -> Self {
        HhlConfig {
            alpha,
            ..Default::default()
        }
    }

    /// Scaling for `eig` honouring the overrides. With only `t` overridden,
    /// `c` is the smallest nonzero grid eigenvalue.
    pub fn resolve_scaling(&self, eig: &EigenDecomposition) -> Result<SpectralScaling, HhlError> {
        let mut scaling = match self.t_override {
            Some(t) if t.is_finite() && t > 0.0 => with_grid_c(t, self.alpha),
            Some(t) => return Err(HhlError::InvalidOverride("t", t)),
            None => self.scaling.apply(eig, self.alpha)?,
        };
        if let Some(c) = self.c_override {
            if !(c.is_finite() && c > 0.0) {
                return Err(HhlError::InvalidOverride("c", c));
            }
            scaling.c = c;
        }
        if self.alpha == 0 || self.alpha > super::MAX_CLOCK_QUBITS {
            return Err(HhlError::InvalidAlpha(self.alpha));
        }
        Ok(scaling)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HhlResult {
    /// Unit-norm solution read from the solution register, sign fixed so
    /// the largest-magnitude entry is positive.
    pub solution_unit: Vec<f64>,
    /// Probability of measuring the ancilla in |1⟩.
    pub success_probability: f64,
    /// Estimate of `‖θ‖` from the success probability.
    pub recovered_norm: f64,
    /// Squared overlap with the classical solution.
    pub fidelity: f64,
    /// Probability mass off clock |0⟩ after uncomputation, given ancilla |1⟩.
    pub residual_clock_leak: f64,
    pub metrics: CircuitMetrics,
    pub config: HhlConfig,
    pub scaling: SpectralScaling,
}

/// The assembled HHL program for one right-hand side.
#[derive(Debug, Clone)]
pub struct HhlProgram {
    pub layout: RegisterLayout,
    pub scaling: SpectralScaling,
    pub circuit: Circuit,
}

/// Solution-register size for an `n`-dimensional system.
pub fn solution_qubits(n: usize) -> usize {
    n.max(2).next_power_of_two().trailing_zeros() as usize
}

/// Pads `b` to `2^β` with `λ_max` on the new diagonal so neither the
/// spectrum's ends nor the scaling change.
fn padded_matrix(b: &DMatrix<f64>, dim: usize, lambda_max: f64) -> DMatrix<f64> {
    let n = b.nrows();
    DMatrix::from_fn(dim, dim, |r, c| match (r < n, c < n) {
        (true, true) => b[(r, c)],
        _ if r == c => lambda_max,
        _ => 0.0,
    })
}

/// State preparation, phase estimation, reciprocal rotation and inverse
/// phase estimation. `p_unit` must already be padded to `2^β` entries.
/// Without `rotate` the ancilla rotation is omitted, which leaves
/// QPE followed by its inverse.
pub fn build_hhl_circuit(
    eig: &EigenDecomposition,
    scaling: &SpectralScaling,
    p_unit: &[f64],
    rotate: bool,
) -> Result<HhlProgram, HhlError> {
    let beta = p_unit.len().trailing_zeros() as usize;
    let layout = RegisterLayout {
        beta,
        alpha: scaling.alpha,
    };
    if layout.width() > super::MAX_WIDTH {
        return Err(HhlError::TooWide(layout.width()));
    }

    let mut circuit = Circuit::new(layout.width())?;
    circuit.append(&prepare_state(p_unit)?)?;
    let qpe = build_qpe(eig, scaling, layout)?;
    circuit.append(&qpe)?;
    if rotate {
        circuit.push(build_reciprocal_rotation(scaling, layout))?;
    }
    circuit.append(&qpe.inverse())?;
    Ok(HhlProgram {
        layout,
        scaling: *scaling,
        circuit,
    })
}

/// Builds the full HHL circuit for `sys` without simulating it. Systems
/// whose size is not a power of two are padded with `λ_max` on the diagonal
/// and zeros in `p`.
pub fn hhl_program(sys: &ReducedSystem, config: &HhlConfig) -> Result<HhlProgram, HhlError> {
    let n = sys.n();
    if n == 0 {
        return Err(HhlError::EmptySystem);
    }
    let p_norm = sys.p.norm();
    if !(p_norm > 0.0) {
        return Err(HhlError::ZeroVector);
    }

    let dim = 1usize << solution_qubits(n);
    let base = EigenDecomposition::of(&sys.b)?;
    let eig = if dim == n {
        base
    } else {
        EigenDecomposition::of(&padded_matrix(&sys.b, dim, base.lambda_max()))?
    };
    let scaling = config.resolve_scaling(&eig)?;

    let mut p_unit: Vec<f64> = sys.p.iter().map(|v| v / p_norm).collect();
    p_unit.resize(dim, 0.0);
    build_hhl_circuit(&eig, &scaling, &p_unit, true)
}

/// Runs the HHL pipeline on `sys` and scores it against the classical solve.
pub fn run_hhl(sys: &ReducedSystem, config: &HhlConfig) -> Result<HhlResult, HhlError> {
    let program = hhl_program(sys, config)?;
    let n = sys.n();
    let dim = 1usize << program.layout.beta;
    let p_norm = sys.p.norm();
    let scaling = program.scaling;
    let layout = program.layout;
    let mut state = StateVector::zero(layout.width());
    state.apply_circuit(&program.circuit)?;

    let selected = state
        .post_select(layout.ancilla(), true)
        .map_err(|_| HhlError::PostSelection { probability: 0.0 })?;
    if selected.probability < MIN_SUCCESS_PROBABILITY {
        return Err(HhlError::PostSelection {
            probability: selected.probability,
        });
    }

    // Clock |0⟩ with ancilla |1⟩ occupies indices 2^{α+β} + r for r < 2^β.
    let offset = 1usize << layout.ancilla();
    let register: Vec<_> = (0..dim)
        .map(|r| selected.state.amplitudes()[offset | r])
        .collect();
    let kept: f64 = register.iter().map(|a| a.norm_sqr()).sum();
    let residual_clock_leak = (1.0 - kept).clamp(0.0, 1.0);

    let pivot = register
        .iter()
        .take(n)
        .enumerate()
        .fold((0, 0.0), |best, (i, a)| {
            if a.norm() > best.1 {
                (i, a.norm())
            } else {
                best
            }
        })
        .0;
    let phase = register[pivot] / register[pivot].norm();
    let real: Vec<f64> = register
        .iter()
        .take(n)
        .map(|a| (a * phase.conj()).re)
        .collect();
    let real_norm = real.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(real_norm > 0.0) {
        return Err(HhlError::PostSelection { probability: kept });
    }
    let solution_unit: Vec<f64> = real.iter().map(|x| x / real_norm).collect();

    let classical = solve_dc(sys)?;
    let fidelity = fidelity(classical.as_slice(), &solution_unit)?;

    Ok(HhlResult {
        solution_unit,
        success_probability: selected.probability,
        recovered_norm: selected.probability.sqrt() / scaling.c * p_norm,
        fidelity,
        residual_clock_leak,
        metrics: metrics(&program.circuit),
        config: *config,
        scaling,
    })
}
