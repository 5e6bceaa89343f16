use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::HhlError;

/// Eigenvalues (ascending) and orthonormal eigenvectors of a real symmetric
/// positive definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub lambdas: Vec<f64>,
    /// Column `j` is the eigenvector for `lambdas[j]`.
    pub vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn of(b: &DMatrix<f64>) -> Result<Self, HhlError> {
        let eig = SymmetricEigen::new(b.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        let lambdas: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        if let Some(&bad) = lambdas.iter().find(|l| !(**l > 0.0)) {
            return Err(HhlError::NonPositiveEigenvalue(bad));
        }
        let vectors =
            DMatrix::from_fn(b.nrows(), b.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(EigenDecomposition { lambdas, vectors })
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambdas[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambdas[self.lambdas.len() - 1]
    }

    /// Coordinates of `v` in the eigenbasis.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|j| {
                self.vectors
                    .column(j)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Evolution time, clock size and reciprocal-rotation constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralScaling {
    /// Evolution time of `e^{iBt}`, radians per unit eigenvalue.
    pub t: f64,
    pub alpha: usize,
    /// Reciprocal-rotation constant, in eigenvalue units.
    pub c: f64,
}

impl SpectralScaling {
    pub fn clock_size(&self) -> usize {
        1 << self.alpha
    }

    /// The eigenvalue represented by clock integer `m`: `2π m / (2^α t)`.
    pub fn clock_eigenvalue(&self, m: usize) -> f64 {
        TAU * m as f64 / (self.clock_size() as f64 * self.t)
    }

    /// Position of `lambda` on the clock grid, `λ t 2^α / 2π` (not reduced
    /// modulo `2^α`).
    pub fn clock_position(&self, lambda: f64) -> f64 {
        lambda * self.t * self.clock_size() as f64 / TAU
    }

    /// Ancilla |1⟩ amplitude written for clock integer `m`; zero for `m = 0`.
    pub fn reciprocal_amplitude(&self, m: usize) -> f64 {
        if m == 0 {
            0.0
        } else {
            (self.c / self.clock_eigenvalue(m)).min(1.0)
        }
    }
}

/// How the evolution time is derived from the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingRule {
    /// `λ_min` lands on clock integer 1. The grid then spans `[λ_min,
    /// (2^α − 1) λ_min]`; eigenvalues above that wrap around the clock.
    #[default]
    AnchorSmallest,
    /// `λ_max` lands on clock integer `2^α − 1`; nothing wraps, but
    /// eigenvalues below `λ_max / (2^α − 1)` fall between 0 and 1.
    FullRange,
}

impl ScalingRule {
    pub fn apply(
        self,
        eig: &EigenDecomposition,
        alpha: usize,
    ) -> Result<SpectralScaling, HhlError> {
        match self {
            ScalingRule::AnchorSmallest => anchor_smallest(eig, alpha),
            ScalingRule::FullRange => choose_scaling(eig, alpha),
        }
    }
}

fn check(eig: &EigenDecomposition, alpha: usize) -> Result<(), HhlError> {
    if alpha == 0 || alpha > super::MAX_CLOCK_QUBITS {
        return Err(HhlError::InvalidAlpha(alpha));
    }
    if let Some(&bad) = eig.lambdas.iter().find(|l| !(**l > 0.0)) {
        return Err(HhlError::NonPositiveEigenvalue(bad));
    }
    Ok(())
}

/// Maps `λ_max` to the top clock integer `2^α − 1`:
/// `t = 2π (2^α − 1) / (2^α λ_max)` and `c = 2π / (2^α t)`, the smallest
/// nonzero grid eigenvalue.
pub fn choose_scaling(eig: &EigenDecomposition, alpha: usize) -> Result<SpectralScaling, HhlError> {
    check(eig, alpha)?;
    let size = (1usize << alpha) as f64;
    let t = TAU * (size - 1.0) / (size * eig.lambda_max());
    Ok(with_grid_c(t, alpha))
}

/// Maps `λ_min` to clock integer 1: `t = 2π / (2^α λ_min)`, `c = λ_min`.
pub fn anchor_smallest(
    eig: &EigenDecomposition,
    alpha: usize,
) -> Result<SpectralScaling, HhlError> {
    check(eig, alpha)?;
    let size = (1usize << alpha) as f64;
    let t = TAU / (size * eig.lambda_min());
    Ok(with_grid_c(t, alpha))
}

pub(crate) fn with_grid_c(t: f64, alpha: usize) -> SpectralScaling {
    let c = TAU / ((1usize << alpha) as f64 * t);
    SpectralScaling { t, alpha, c }
}
