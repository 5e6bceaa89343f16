use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::{BusId, GridError, Network};

/// The reduced DC power flow system `B θ = p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSystem {
    /// Per-unit susceptance matrix with the slack row and column removed.
    pub b: DMatrix<f64>,
    /// Non-slack injections in per-unit.
    pub p: DVector<f64>,
    /// Bus id of each matrix row.
    pub bus_order: Vec<BusId>,
}

impl ReducedSystem {
    pub fn n(&self) -> usize {
        self.p.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkStats {
    pub n: usize,
    /// Largest number of nonzeros in any row of the reduced matrix.
    pub s: usize,
    /// `λ_min / λ_max` of the reduced matrix.
    pub k_ratio: f64,
    /// Eigenvalues of the reduced matrix, ascending.
    pub eigenvalues: Vec<f64>,
}

/// Full bus susceptance matrix in ascending bus id order, before slack removal.
pub(crate) fn full_susceptance(network: &Network) -> (Vec<BusId>, DMatrix<f64>) {
    let mut ids: Vec<BusId> = network.buses().iter().map(|b| b.id).collect();
    ids.sort_unstable();
    let index = |id: BusId| ids.binary_search(&id).expect("validated bus id");

    let n = ids.len();
    let mut b = DMatrix::zeros(n, n);
    for br in network.branches() {
        let (i, j) = (index(br.from_bus), index(br.to_bus));
        let y = 1.0 / br.x;
        b[(i, i)] += y;
        b[(j, j)] += y;
        b[(i, j)] -= y;
        b[(j, i)] -= y;
    }
    (ids, b)
}

/// Forms the reduced susceptance matrix and injection vector.
pub fn build_reduced_system(network: &Network) -> Result<ReducedSystem, GridError> {
    let (ids, full) = full_susceptance(network);
    let slack_id = network.slack().id;
    let keep: Vec<usize> = (0..ids.len()).filter(|&i| ids[i] != slack_id).collect();

    let n = keep.len();
    let b = DMatrix::from_fn(n, n, |r, c| full[(keep[r], keep[c])]);
    let bus_order: Vec<BusId> = keep.iter().map(|&i| ids[i]).collect();
    let p = DVector::from_iterator(
        n,
        bus_order.iter().map(|id| {
            network
                .buses()
                .iter()
                .find(|b| b.id == *id)
                .expect("bus exists")
                .p_injection
        }),
    );

    if Cholesky::new(b.clone()).is_none() {
        return Err(GridError::NotPositiveDefinite);
    }
    Ok(ReducedSystem { b, p, bus_order })
}

/// Solves `B θ = p` for the non-slack voltage angles in radians by Cholesky
/// factorization.
pub fn solve_dc(sys: &ReducedSystem) -> Result<DVector<f64>, GridError> {
    let chol = Cholesky::new(sys.b.clone()).ok_or(GridError::NotPositiveDefinite)?;
    Ok(chol.solve(&sys.p))
}

pub fn network_stats(network: &Network) -> Result<NetworkStats, GridError> {
    let sys = build_reduced_system(network)?;
    let s = sys
        .b
        .row_iter()
        .map(|row| row.iter().filter(|v| **v != 0.0).count())
        .max()
        .unwrap_or(0);

    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(sys.b.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    let k_ratio = eigenvalues[0] / eigenvalues[eigenvalues.len() - 1];

    Ok(NetworkStats {
        n: sys.n(),
        s,
        k_ratio,
        eigenvalues,
    })
}

/// Per-unit flow on every branch, `(θ_from − θ_to) / x`, in branch order.
///
/// `angles` are in `sys.bus_order`; the slack angle is taken as zero.
pub fn branch_flows(network: &Network, sys: &ReducedSystem, angles: &DVector<f64>) -> Vec<f64> {
    let angle = |id: BusId| {
        sys.bus_order
            .iter()
            .position(|b| *b == id)
            .map_or(0.0, |i| angles[i])
    };
    network
        .branches()
        .iter()
        .map(|br| (angle(br.from_bus) - angle(br.to_bus)) / br.x)
        .collect()
}
