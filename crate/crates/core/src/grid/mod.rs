//! Power-network model and the classical DC power flow.
//!
//! A [`Network`] is a set of buses with per-unit real power injections and a
//! set of purely reactive branches. [`build_reduced_system`] forms the
//! susceptance matrix `B` (a weighted graph Laplacian with entries `1/x`),
//! deletes the slack bus row and column and returns the symmetric positive
//! definite system `B θ = p` solved by [`solve_dc`].
//!
//! Rows of the reduced system follow ascending bus id with the slack bus
//! removed.

mod network;
mod system;

pub use network::{load_network, wscc9, Branch, Bus, BusId, Network, WSCC9_JSON};
pub use system::{
    branch_flows, build_reduced_system, network_stats, solve_dc, NetworkStats, ReducedSystem,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("duplicate bus id {0}")]
    DuplicateBus(BusId),
    #[error("branch {from}-{to} has non-positive reactance {x}")]
    NonPositiveReactance { from: BusId, to: BusId, x: f64 },
    #[error("branch {0}-{0} connects a bus to itself")]
    SelfLoop(BusId),
    #[error("branch references unknown bus {0}")]
    UnknownBus(BusId),
    #[error("no slack bus")]
    NoSlack,
    #[error("multiple slacks: buses {0:?}")]
    MultipleSlacks(Vec<BusId>),
    #[error("network needs at least 2 buses, got {0}")]
    TooFewBuses(usize),
    #[error("base_mva must be positive and finite, got {0}")]
    InvalidBaseMva(f64),
    #[error("injection at bus {0} is not finite")]
    NonFiniteInjection(BusId),
    #[error("network is disconnected: bus {0} is unreachable from the slack bus")]
    Disconnected(BusId),
    #[error("reduced susceptance matrix is not positive definite")]
    NotPositiveDefinite,
}
