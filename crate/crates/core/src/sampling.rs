//! Budgeted node sampling and sampling-bias benchmarks.
//!
//! Directed graphs are crawled along out-edges (snowball, random walk); the
//! top-degree strategy ranks by in-degree on directed graphs and by degree
//! otherwise, with the ranking tie rule.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Class};
use crate::ranking::{rank_nodes, Metric};
use crate::rng::{derive_seed, Rng};
use crate::stats::{mean, std_dev};

/// Per-step restart probability of the random-walk sampler.
pub const WALK_RESTART: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    UniformNode,
    UniformEdge,
    Snowball,
    RandomWalk,
    TopDegree,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::UniformNode,
        Strategy::UniformEdge,
        Strategy::Snowball,
        Strategy::RandomWalk,
        Strategy::TopDegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::UniformNode => "uniform-node",
            Strategy::UniformEdge => "uniform-edge",
            Strategy::Snowball => "snowball",
            Strategy::RandomWalk => "random-walk",
            Strategy::TopDegree => "top-degree",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s.trim())
            .ok_or_else(|| Error::invalid(format!("unknown sampling strategy `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleResult {
    pub strategy: Strategy,
    pub budget: usize,
    /// Sampled ids in collection order.
    pub nodes: Vec<usize>,
    pub seed: u64,
}

/// Collects distinct nodes in insertion order up to a size limit.
struct Collector {
    seen: Vec<bool>,
    nodes: Vec<usize>,
    limit: usize,
}

impl Collector {
    fn new(n: usize, limit: usize) -> Self {
        Collector {
            seen: vec![false; n],
            nodes: Vec::with_capacity(limit),
            limit,
        }
    }

    fn add(&mut self, v: usize) -> bool {
        if self.full() || self.seen[v] {
            return false;
        }
        self.seen[v] = true;
        self.nodes.push(v);
        true
    }

    fn full(&self) -> bool {
        self.nodes.len() >= self.limit
    }

    fn random_unseen(&self, rng: &mut Rng) -> usize {
        loop {
            let v = rng.below(self.seen.len());
            if !self.seen[v] {
                return v;
            }
        }
    }
}

pub fn sample(
    g: &AttributedGraph,
    strategy: Strategy,
    budget: usize,
    seed: u64,
) -> Result<SampleResult> {
    if budget < 1 {
        return Err(Error::invalid("sampling budget must be at least 1"));
    }
    let n = g.node_count();
    let limit = budget.min(n);
    let mut rng = Rng::new(seed);
    let mut c = Collector::new(n, limit);
    match strategy {
        Strategy::UniformNode => {
            while !c.full() {
                let v = c.random_unseen(&mut rng);
                c.add(v);
            }
        }
        Strategy::UniformEdge => {
            let edges: Vec<(usize, usize)> = g.edges().collect();
            let covered = (0..n).filter(|&v| g.degree(v) > 0).count();
            while !c.full() && c.nodes.len() < covered {
                let (u, v) = edges[rng.below(edges.len())];
                c.add(u);
                c.add(v);
            }
            // isolated nodes are unreachable by edge draws
            while !c.full() {
                let v = c.random_unseen(&mut rng);
                c.add(v);
            }
        }
        Strategy::Snowball => {
            let mut queue = VecDeque::new();
            while !c.full() {
                let start = c.random_unseen(&mut rng);
                c.add(start);
                queue.push_back(start);
                while let Some(u) = queue.pop_front() {
                    for &v in g.neighbors(u) {
                        if c.add(v) {
                            queue.push_back(v);
                        }
                    }
                    if c.full() {
                        break;
                    }
                }
            }
        }
        Strategy::RandomWalk => {
            let mut at = rng.below(n);
            c.add(at);
            while !c.full() {
                let nbrs = g.neighbors(at);
                at = if nbrs.is_empty() || rng.next_f64() < WALK_RESTART {
                    rng.below(n)
                } else {
                    nbrs[rng.below(nbrs.len())]
                };
                c.add(at);
            }
        }
        Strategy::TopDegree => {
            let metric = if g.is_directed() {
                Metric::InDegree
            } else {
                Metric::Degree
            };
            for v in rank_nodes(g, metric)?.into_iter().take(limit) {
                c.add(v);
            }
        }
    }
    Ok(SampleResult {
        strategy,
        budget,
        nodes: c.nodes,
        seed,
    })
}

/// Seed of one benchmark cell: `seed XOR mix(strategy, budget, rep)` where
/// `mix` chains [`derive_seed`] over the three coordinates.
pub fn cell_seed(seed: u64, strategy: Strategy, budget: usize, rep: usize) -> u64 {
    let h = derive_seed(derive_seed(strategy.tag(), budget as u64), rep as u64);
    seed ^ h
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleRun {
    pub strategy: Strategy,
    pub budget: usize,
    pub rep: usize,
    pub minority_fraction: f64,
    pub mean_degree: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasCell {
    pub strategy: Strategy,
    pub budget: usize,
    pub reps: usize,
    pub minority_bias_mean: f64,
    pub minority_bias_sd: f64,
    pub minority_abs_bias_mean: f64,
    pub degree_bias_mean: f64,
    pub degree_bias_sd: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasReport {
    pub population_minority_fraction: f64,
    pub population_mean_degree: f64,
    /// Ordered by strategy (input order), budget (input order), rep.
    pub runs: Vec<SampleRun>,
    pub cells: Vec<BiasCell>,
}

fn sample_stats(g: &AttributedGraph, nodes: &[usize]) -> (f64, f64) {
    let k = nodes.len() as f64;
    let minority = nodes
        .iter()
        .filter(|&&v| g.label(v) == Class::Minority)
        .count();
    let degree: usize = nodes.iter().map(|&v| g.degree(v)).sum();
    (minority as f64 / k, degree as f64 / k)
}

/// Full factorial strategy × budget × repetition benchmark. Runs are
/// independent and evaluated in parallel; output order is fixed.
pub fn benchmark(
    g: &AttributedGraph,
    strategies: &[Strategy],
    budgets: &[usize],
    reps: usize,
    seed: u64,
) -> Result<BiasReport> {
    if reps < 1 {
        return Err(Error::invalid("need at least one repetition"));
    }
    let n = g.node_count();
    if let Some(&b) = budgets.iter().find(|&&b| b < 1 || b > n) {
        return Err(Error::invalid(format!("budget {b} outside [1, {n}]")));
    }
    let all: Vec<usize> = (0..n).collect();
    let (pop_fm, pop_deg) = sample_stats(g, &all);
    let jobs: Vec<(Strategy, usize, usize)> = strategies
        .iter()
        .flat_map(|&s| {
            budgets
                .iter()
                .flat_map(move |&b| (0..reps).map(move |r| (s, b, r)))
        })
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(strategy, budget, rep)| {
            let res = sample(g, strategy, budget, cell_seed(seed, strategy, budget, rep))?;
            let (fm, deg) = sample_stats(g, &res.nodes);
            Ok(SampleRun {
                strategy,
                budget,
                rep,
                minority_fraction: fm,
                mean_degree: deg,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let cells = runs
        .chunks(reps)
        .map(|chunk| {
            let fm: Vec<f64> = chunk.iter().map(|r| r.minority_fraction - pop_fm).collect();
            let deg: Vec<f64> = chunk.iter().map(|r| r.mean_degree - pop_deg).collect();
            let abs: Vec<f64> = fm.iter().map(|x| x.abs()).collect();
            BiasCell {
                strategy: chunk[0].strategy,
                budget: chunk[0].budget,
                reps,
                minority_bias_mean: mean(&fm),
                minority_bias_sd: std_dev(&fm),
                minority_abs_bias_mean: mean(&abs),
                degree_bias_mean: mean(&deg),
                degree_bias_sd: std_dev(&deg),
            }
        })
        .collect();
    Ok(BiasReport {
        population_minority_fraction: pop_fm,
        population_mean_degree: pop_deg,
        runs,
        cells,
    })
}
