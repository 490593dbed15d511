use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Class};

/// Which branch of the sampler produced an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// Degree/homophily-weighted pick.
    PahPick,
    /// Uniform pick among neighbors of already-chosen targets.
    TcPick,
    /// Uniform pick forced by zero total weight; carries no parameter information.
    FallbackUniform,
    /// Target pick of the directed family.
    DirectedPick,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::PahPick => "pah-pick",
            EventKind::TcPick => "tc-pick",
            EventKind::FallbackUniform => "fallback-uniform",
            EventKind::DirectedPick => "directed-pick",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pah-pick" => Ok(EventKind::PahPick),
            "tc-pick" => Ok(EventKind::TcPick),
            "fallback-uniform" => Ok(EventKind::FallbackUniform),
            "directed-pick" => Ok(EventKind::DirectedPick),
            other => Err(Error::invalid(format!("unknown event kind `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub source: usize,
    pub target: usize,
    pub kind: EventKind,
}

/// Ordered edge events of one generation run.
///
/// For undirected growth, node ids are arrival order: nodes below
/// `seed_size` form the seed (a clique when `seed_size >= 2`) and every
/// later node is the source of its own attachment events, which only target
/// earlier nodes. The event position is the snapshot cursor: replay
/// re-simulates the state before each event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTrace {
    pub directed: bool,
    pub n: usize,
    pub seed_size: usize,
    pub events: Vec<TraceEvent>,
}

impl GrowthTrace {
    /// Trace as read back from an event list alone. Undirected seeds are
    /// inferred from the first arriving node (its id equals the seed size).
    pub fn from_events(directed: bool, n: usize, events: Vec<TraceEvent>) -> Self {
        let seed_size = if directed {
            0
        } else {
            events.first().map_or(1, |e| e.source)
        };
        GrowthTrace {
            directed,
            n,
            seed_size,
            events,
        }
    }

    /// Seed-clique edges that precede the first event.
    pub fn seed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let s = if self.directed { 0 } else { self.seed_size };
        (0..s).flat_map(move |u| (u + 1..s).map(move |v| (u, v)))
    }

    /// Checks ordering rules: undirected sources are non-decreasing arrivals
    /// at or after the seed, targets are earlier nodes, no event repeats an
    /// edge.
    pub fn validate(&self) -> Result<()> {
        let mut last_source = 0;
        for (i, e) in self.events.iter().enumerate() {
            if e.source >= self.n || e.target >= self.n {
                return Err(Error::invalid(format!(
                    "event {i}: node id out of range for n = {}",
                    self.n
                )));
            }
            if self.directed {
                if e.kind != EventKind::DirectedPick {
                    return Err(Error::invalid(format!(
                        "event {i}: {} in a directed trace",
                        e.kind
                    )));
                }
            } else {
                if e.kind == EventKind::DirectedPick {
                    return Err(Error::invalid(format!(
                        "event {i}: directed-pick in an undirected trace"
                    )));
                }
                if e.source < self.seed_size || e.source < last_source || e.target >= e.source {
                    return Err(Error::invalid(format!(
                        "event {i}: ({}, {}) breaks arrival order",
                        e.source, e.target
                    )));
                }
                last_source = e.source;
            }
        }
        Ok(())
    }

    /// Rebuilds the final graph from the seed state plus every event.
    pub fn replay(&self, labels: &[Class]) -> Result<AttributedGraph> {
        if labels.len() != self.n {
            return Err(Error::invalid(format!(
                "trace has n = {} but {} labels were given",
                self.n,
                labels.len()
            )));
        }
        self.validate()?;
        let mut g = AttributedGraph::new(self.directed, labels.to_vec())?;
        for (u, v) in self.seed_edges() {
            g.add_edge(u, v)?;
        }
        for (i, e) in self.events.iter().enumerate() {
            if !g.add_edge(e.source, e.target)? {
                return Err(Error::invalid(format!(
                    "event {i}: ({}, {}) is a self-loop or repeated edge",
                    e.source, e.target
                )));
            }
        }
        Ok(g)
    }

    pub fn count_kind(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }
}
