use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::GridError;

pub type BusId = u32;

/// The WSCC 9-bus test system on a 100 MVA base.
pub const WSCC9_JSON: &str = include_str!("../../data/wscc9.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bus {
    pub id: BusId,
    pub slack: bool,
    /// Net real power injection in per-unit; generation positive, load negative.
    #[serde(rename = "p_pu")]
    pub p_injection: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    #[serde(rename = "from")]
    pub from_bus: BusId,
    #[serde(rename = "to")]
    pub to_bus: BusId,
    /// Series reactance in per-unit.
    #[serde(rename = "x_pu")]
    pub x: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    base_mva: f64,
    buses: Vec<Bus>,
    branches: Vec<Branch>,
}

/// A validated power network.
///
/// Construction guarantees unique bus ids, exactly one slack bus, positive
/// reactances, no self loops and a connected branch graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Network {
    base_mva: f64,
    buses: Vec<Bus>,
    branches: Vec<Branch>,
}

impl Network {
    pub fn new(base_mva: f64, buses: Vec<Bus>, branches: Vec<Branch>) -> Result<Self, GridError> {
        if !(base_mva.is_finite() && base_mva > 0.0) {
            return Err(GridError::InvalidBaseMva(base_mva));
        }
        if buses.len() < 2 {
            return Err(GridError::TooFewBuses(buses.len()));
        }

        let mut ids = BTreeSet::new();
        for bus in &buses {
            if !ids.insert(bus.id) {
                return Err(GridError::DuplicateBus(bus.id));
            }
            if !bus.p_injection.is_finite() {
                return Err(GridError::NonFiniteInjection(bus.id));
            }
        }

        let slacks: Vec<BusId> = buses.iter().filter(|b| b.slack).map(|b| b.id).collect();
        let slack = match slacks.as_slice() {
            [] => return Err(GridError::NoSlack),
            [one] => *one,
            _ => return Err(GridError::MultipleSlacks(slacks)),
        };

        for br in &branches {
            for end in [br.from_bus, br.to_bus] {
                if !ids.contains(&end) {
                    return Err(GridError::UnknownBus(end));
                }
            }
            if br.from_bus == br.to_bus {
                return Err(GridError::SelfLoop(br.from_bus));
            }
            if !(br.x.is_finite() && br.x > 0.0) {
                return Err(GridError::NonPositiveReactance {
                    from: br.from_bus,
                    to: br.to_bus,
                    x: br.x,
                });
            }
        }

        let net = Network {
            base_mva,
            buses,
            branches,
        };
        if let Some(orphan) = net.first_unreachable(slack) {
            return Err(GridError::Disconnected(orphan));
        }
        Ok(net)
    }

    pub fn from_json_str(json: &str) -> Result<Self, GridError> {
        let raw: RawNetwork = serde_json::from_str(json)?;
        Network::new(raw.base_mva, raw.buses, raw.branches)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, GridError> {
        let file = std::fs::File::open(path)?;
        load_network(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    pub fn base_mva(&self) -> f64 {
        self.base_mva
    }

    pub fn buses(&self) -> &[Bus] {
        &self.buses
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn slack(&self) -> &Bus {
        self.buses
            .iter()
            .find(|b| b.slack)
            .expect("validated network has a slack bus")
    }

    /// Non-slack bus ids in ascending order; this is the row order of the
    /// reduced system.
    pub fn non_slack_ids(&self) -> Vec<BusId> {
        let mut ids: Vec<BusId> = self
            .buses
            .iter()
            .filter(|b| !b.slack)
            .map(|b| b.id)
            .collect();
        ids.sort_unstable();
        ids
    }

    fn first_unreachable(&self, start: BusId) -> Option<BusId> {
        let mut adj: BTreeMap<BusId, Vec<BusId>> = BTreeMap::new();
        for br in &self.branches {
            adj.entry(br.from_bus).or_default().push(br.to_bus);
            adj.entry(br.to_bus).or_default().push(br.from_bus);
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(bus) = queue.pop_front() {
            for &next in adj.get(&bus).into_iter().flatten() {
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        let mut ids: Vec<BusId> = self.buses.iter().map(|b| b.id).collect();
        ids.sort_unstable();
        ids.into_iter().find(|id| !seen.contains(id))
    }
}

/// Reads a network from a JSON byte stream.
pub fn load_network<R: Read>(mut source: R) -> Result<Network, GridError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    Network::from_json_str(&text)
}

/// The built-in WSCC 9-bus fixture.
pub fn wscc9() -> Network {
    Network::from_json_str(WSCC9_JSON).expect("embedded fixture is valid")
}
