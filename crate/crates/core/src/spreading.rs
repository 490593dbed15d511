//! Simple (independent cascade) and complex (threshold) contagion, seeding
//! conditions, and information-access equality metrics.
//!
//! Attempt schedule of [`cascade`]: at step `t` the nodes activated at `t-1`
//! are processed in increasing id order; each tries its (out-)neighbors in
//! increasing id order, and every attempt on a still-inactive node consumes
//! exactly one uniform draw, compared against `p_in` or `p_out`. With
//! `p_in == p_out` the draws, and hence the trace, do not depend on labels.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Class};
use crate::ranking::{rank_nodes, Metric};
use crate::rng::Rng;

/// Overall informed fraction that defines efficiency.
pub const EFFICIENCY_LEVEL: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Contagion {
    Independent { p_in: f64, p_out: f64 },
    Threshold { theta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeTrace {
    pub contagion: Contagion,
    pub seeds: Vec<usize>,
    /// Activation step per node; `None` if never informed.
    pub activation: Vec<Option<usize>>,
    /// Informed fraction per class at each step `0..=steps`.
    pub class_fractions: Vec<[f64; 2]>,
    /// Informed fraction of all nodes at each step.
    pub overall: Vec<f64>,
}

impl CascadeTrace {
    pub fn steps(&self) -> usize {
        self.overall.len() - 1
    }

    pub fn informed(&self) -> usize {
        self.activation.iter().filter(|t| t.is_some()).count()
    }

    /// First step at which `class` reaches `level` informed, if ever.
    pub fn time_to_fraction(&self, class: Class, level: f64) -> Option<usize> {
        self.class_fractions
            .iter()
            .position(|f| f[class.index()] >= level)
    }

    pub fn overall_time_to_fraction(&self, level: f64) -> Option<usize> {
        self.overall.iter().position(|&f| f >= level)
    }
}

fn check_seeds(g: &AttributedGraph, seeds: &[usize]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::invalid("seed set is empty"));
    }
    if let Some(&s) = seeds.iter().find(|&&s| s >= g.node_count()) {
        return Err(Error::invalid(format!("seed {s} is not a node")));
    }
    Ok(())
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!(
            "{name} must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Default step cap: ten times the node count.
pub fn default_max_steps(g: &AttributedGraph) -> usize {
    10 * g.node_count()
}

struct Series {
    counts: [usize; 2],
    sizes: [usize; 2],
    class_fractions: Vec<[f64; 2]>,
    overall: Vec<f64>,
}

impl Series {
    fn new(g: &AttributedGraph) -> Self {
        Series {
            counts: [0; 2],
            sizes: g.class_counts(),
            class_fractions: Vec::new(),
            overall: Vec::new(),
        }
    }

    fn activate(&mut self, class: Class) {
        self.counts[class.index()] += 1;
    }

    fn record(&mut self) {
        let frac = |c: usize, s: usize| if s == 0 { 0.0 } else { c as f64 / s as f64 };
        self.class_fractions.push([
            frac(self.counts[0], self.sizes[0]),
            frac(self.counts[1], self.sizes[1]),
        ]);
        self.overall.push(frac(
            self.counts[0] + self.counts[1],
            self.sizes[0] + self.sizes[1],
        ));
    }
}

fn seed_state(g: &AttributedGraph, seeds: &[usize]) -> (Vec<Option<usize>>, Vec<usize>, Series) {
    let mut activation = vec![None; g.node_count()];
    let mut series = Series::new(g);
    let mut frontier = Vec::new();
    for &s in seeds {
        if activation[s].is_none() {
            activation[s] = Some(0);
            series.activate(g.label(s));
            frontier.push(s);
        }
    }
    frontier.sort_unstable();
    series.record();
    (activation, frontier, series)
}

pub fn cascade(
    g: &AttributedGraph,
    seeds: &[usize],
    p_in: f64,
    p_out: f64,
    rng: &mut Rng,
    max_steps: usize,
) -> Result<CascadeTrace> {
    check_seeds(g, seeds)?;
    check_prob("p_in", p_in)?;
    check_prob("p_out", p_out)?;
    let (mut activation, mut frontier, mut series) = seed_state(g, seeds);
    let mut t = 0;
    while !frontier.is_empty() && t < max_steps {
        t += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            let cu = g.label(u);
            for &v in g.neighbors(u) {
                if activation[v].is_some() {
                    continue;
                }
                let p = if g.label(v) == cu { p_in } else { p_out };
                if rng.next_f64() < p {
                    activation[v] = Some(t);
                    series.activate(g.label(v));
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        series.record();
        frontier = next;
    }
    Ok(CascadeTrace {
        contagion: Contagion::Independent { p_in, p_out },
        seeds: seeds.to_vec(),
        activation,
        class_fractions: series.class_fractions,
        overall: series.overall,
    })
}

pub fn threshold_cascade(
    g: &AttributedGraph,
    seeds: &[usize],
    theta: f64,
    max_steps: usize,
) -> Result<CascadeTrace> {
    check_seeds(g, seeds)?;
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::invalid(format!(
            "theta must lie in (0, 1], got {theta}"
        )));
    }
    let (mut activation, _, mut series) = seed_state(g, seeds);
    let n = g.node_count();
    let mut t = 0;
    while t < max_steps {
        let newly: Vec<usize> = (0..n)
            .filter(|&v| activation[v].is_none())
            .filter(|&v| {
                let nbrs = if g.is_directed() {
                    g.in_neighbors(v)
                } else {
                    g.neighbors(v)
                };
                if nbrs.is_empty() {
                    return false;
                }
                let active = nbrs.iter().filter(|&&u| activation[u].is_some()).count();
                active as f64 / nbrs.len() as f64 >= theta
            })
            .collect();
        if newly.is_empty() {
            break;
        }
        t += 1;
        for v in newly {
            activation[v] = Some(t);
            series.activate(g.label(v));
        }
        series.record();
    }
    Ok(CascadeTrace {
        contagion: Contagion::Threshold { theta },
        seeds: seeds.to_vec(),
        activation,
        class_fractions: series.class_fractions,
        overall: series.overall,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EqualityReport {
    /// min/max of class informed fractions per step (1 when both are 0).
    pub equality: Vec<f64>,
    /// First step with overall informed fraction at least 0.5.
    pub efficiency: Option<usize>,
    pub terminal: [f64; 2],
}

pub fn equality_index(fractions: [f64; 2]) -> f64 {
    let hi = fractions[0].max(fractions[1]);
    if hi == 0.0 {
        1.0
    } else {
        fractions[0].min(fractions[1]) / hi
    }
}

pub fn equality_report(trace: &CascadeTrace) -> EqualityReport {
    EqualityReport {
        equality: trace
            .class_fractions
            .iter()
            .map(|&f| equality_index(f))
            .collect(),
        efficiency: trace.overall_time_to_fraction(EFFICIENCY_LEVEL),
        terminal: *trace.class_fractions.last().expect("trace has step 0"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Seeding {
    Uniform,
    MajorityOnly,
    MinorityOnly,
    TopDegree,
}

impl Seeding {
    pub const ALL: [Seeding; 4] = [
        Seeding::Uniform,
        Seeding::MajorityOnly,
        Seeding::MinorityOnly,
        Seeding::TopDegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Seeding::Uniform => "uniform",
            Seeding::MajorityOnly => "majority-only",
            Seeding::MinorityOnly => "minority-only",
            Seeding::TopDegree => "top-degree",
        }
    }
}

impl fmt::Display for Seeding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Seeding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Seeding::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::invalid(format!("unknown seeding condition `{s}`")))
    }
}

/// Picks `count` distinct seeds. Top-degree ranks by in-degree on directed
/// graphs; the other conditions sample uniformly without replacement.
pub fn seeding(
    g: &AttributedGraph,
    condition: Seeding,
    count: usize,
    rng: &mut Rng,
) -> Result<Vec<usize>> {
    if count < 1 {
        return Err(Error::invalid("seed count must be at least 1"));
    }
    let n = g.node_count();
    let mut pool: Vec<usize> = match condition {
        Seeding::Uniform | Seeding::TopDegree => (0..n).collect(),
        Seeding::MajorityOnly => (0..n).filter(|&v| g.label(v) == Class::Majority).collect(),
        Seeding::MinorityOnly => (0..n).filter(|&v| g.label(v) == Class::Minority).collect(),
    };
    if count > pool.len() {
        return Err(Error::invalid(format!(
            "{condition} seeding needs {count} nodes, only {} eligible",
            pool.len()
        )));
    }
    if condition == Seeding::TopDegree {
        let metric = if g.is_directed() {
            Metric::InDegree
        } else {
            Metric::Degree
        };
        let mut top = rank_nodes(g, metric)?;
        top.truncate(count);
        return Ok(top);
    }
    // partial Fisher–Yates
    for i in 0..count {
        let j = i + rng.below(pool.len() - i);
        pool.swap(i, j);
    }
    pool.truncate(count);
    Ok(pool)
}
