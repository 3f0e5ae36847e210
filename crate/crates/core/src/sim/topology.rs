use super::{SimError, SimTime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Ring,
    Complete,
}

/// Static network graph with a uniform per-hop delay.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    node_count: usize,
    inter_node_delay: SimTime,
    kind: TopologyKind,
}

impl Topology {
    pub fn new(kind: TopologyKind, node_count: usize, inter_node_delay: SimTime) -> Result<Self, SimError> {
        if node_count == 0 {
            return Err(SimError::InvalidTopology("node_count must be positive".into()));
        }
        if !(inter_node_delay > 0.0 && inter_node_delay.is_finite()) {
            return Err(SimError::InvalidTopology(format!(
                "inter_node_delay must be positive, got {inter_node_delay}"
            )));
        }
        Ok(Self {
            node_count,
            inter_node_delay,
            kind,
        })
    }

    pub fn ring(node_count: usize, inter_node_delay: SimTime) -> Result<Self, SimError> {
        Self::new(TopologyKind::Ring, node_count, inter_node_delay)
    }

    pub fn complete(node_count: usize, inter_node_delay: SimTime) -> Result<Self, SimError> {
        Self::new(TopologyKind::Complete, node_count, inter_node_delay)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn inter_node_delay(&self) -> SimTime {
        self.inter_node_delay
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn hop_distance(&self, from: usize, to: usize) -> Result<usize, SimError> {
        for node in [from, to] {
            if node >= self.node_count {
                return Err(SimError::NodeOutOfRange {
                    node,
                    node_count: self.node_count,
                });
            }
        }
        if from == to {
            return Ok(0);
        }
        Ok(match self.kind {
            TopologyKind::Ring => {
                let d = from.abs_diff(to);
                d.min(self.node_count - d)
            }
            TopologyKind::Complete => 1,
        })
    }

    /// Largest hop distance between any two nodes.
    pub fn diameter(&self) -> usize {
        match self.kind {
            TopologyKind::Ring => self.node_count / 2,
            TopologyKind::Complete => usize::from(self.node_count > 1),
        }
    }

    pub fn propagation_delay(&self, from: usize, to: usize) -> Result<SimTime, SimError> {
        Ok(self.hop_distance(from, to)? as f64 * self.inter_node_delay)
    }
}
