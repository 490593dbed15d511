//! Node rankings and minority visibility.
//!
//! Rankings are descending by score with ties broken by ascending node id.
//! Top-k sets use `ceil(k * n / 100)` nodes for `k` in 5, 10, ..., 100.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Class};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PageRankResult {
    pub scores: Vec<f64>,
    pub iterations: usize,
    /// `false` when `max_iter` ran out; `scores` is then the last iterate.
    pub converged: bool,
}

/// Power iteration with uniform teleport. Dangling nodes spread their mass
/// uniformly; undirected edges count in both directions.
pub fn pagerank(g: &AttributedGraph, config: &PageRankConfig) -> PageRankResult {
    let n = g.node_count();
    let nf = n as f64;
    let d = config.damping;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iter {
        iterations += 1;
        let dangling: f64 = (0..n).filter(|&v| g.out_degree(v) == 0).map(|v| x[v]).sum();
        let base = (1.0 - d) / nf + d * dangling / nf;
        for (v, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = g
                .in_neighbors(v)
                .iter()
                .map(|&u| x[u] / g.out_degree(u) as f64)
                .sum();
            *slot = base + d * inflow;
        }
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if change < config.tol {
            converged = true;
            break;
        }
    }
    let total: f64 = x.iter().sum();
    for s in &mut x {
        *s /= total;
    }
    PageRankResult {
        scores: x,
        iterations,
        converged,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Undirected degree; in + out degree on directed graphs.
    Degree,
    /// Directed graphs only.
    InDegree,
    PageRank,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Degree => "degree",
            Metric::InDegree => "indegree",
            Metric::PageRank => "pagerank",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "degree" => Ok(Metric::Degree),
            "indegree" | "in-degree" => Ok(Metric::InDegree),
            "pagerank" => Ok(Metric::PageRank),
            other => Err(Error::invalid(format!("unknown metric `{other}`"))),
        }
    }
}

pub fn metric_scores(g: &AttributedGraph, metric: Metric) -> Result<Vec<f64>> {
    let n = g.node_count();
    Ok(match metric {
        Metric::Degree => (0..n).map(|v| g.degree(v) as f64).collect(),
        Metric::InDegree => {
            if !g.is_directed() {
                return Err(Error::invalid("metric indegree requires a directed graph"));
            }
            (0..n).map(|v| g.in_degree(v) as f64).collect()
        }
        Metric::PageRank => pagerank(g, &PageRankConfig::default()).scores,
    })
}

/// Node ids by descending score, ties by ascending id.
pub fn rank_by_scores(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

pub fn rank_nodes(g: &AttributedGraph, metric: Metric) -> Result<Vec<usize>> {
    Ok(rank_by_scores(&metric_scores(g, metric)?))
}

/// Size of the top-`k_percent` set of `n` nodes.
pub fn top_k_size(n: usize, k_percent: usize) -> usize {
    (k_percent * n).div_ceil(100)
}

pub const K_PERCENTS: [usize; 20] = [
    5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 70, 75, 80, 85, 90, 95, 100,
];

#[derive(Clone, Debug, PartialEq)]
pub struct VisibilityCurve {
    pub metric: Metric,
    /// Minority share of all nodes.
    pub f_m: f64,
    /// `(k_percent, minority fraction in the top k%)`.
    pub points: Vec<(usize, f64)>,
}

impl VisibilityCurve {
    pub fn at(&self, k_percent: usize) -> Option<f64> {
        self.points.iter().find(|p| p.0 == k_percent).map(|p| p.1)
    }

    /// Signed mean deviation from `f_m` over k < 100.
    pub fn inequity(&self) -> f64 {
        let devs: Vec<f64> = self
            .points
            .iter()
            .filter(|p| p.0 < 100)
            .map(|p| p.1 - self.f_m)
            .collect();
        devs.iter().sum::<f64>() / devs.len() as f64
    }
}

/// Minority fraction among the top-k% of a ranking.
pub fn visibility_from_ranking(
    labels: &[Class],
    ranking: &[usize],
    metric: Metric,
) -> Result<VisibilityCurve> {
    let n = labels.len();
    let minority = labels.iter().filter(|&&c| c == Class::Minority).count();
    if minority == 0 || minority == n {
        return Err(Error::invalid("visibility needs both classes present"));
    }
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0usize);
    for &v in ranking {
        let last = *prefix.last().unwrap();
        prefix.push(last + usize::from(labels[v] == Class::Minority));
    }
    let points = K_PERCENTS
        .iter()
        .map(|&k| {
            let size = top_k_size(n, k);
            (k, prefix[size] as f64 / size as f64)
        })
        .collect();
    Ok(VisibilityCurve {
        metric,
        f_m: minority as f64 / n as f64,
        points,
    })
}

pub fn visibility(g: &AttributedGraph, metric: Metric) -> Result<VisibilityCurve> {
    let ranking = rank_nodes(g, metric)?;
    visibility_from_ranking(g.labels(), &ranking, metric)
}

/// Gini coefficient `Σ_ij |x_i - x_j| / (2 n² mean)`, computed from the
/// sorted values as `Σ_i (2i - n - 1) x_(i) / (n Σ x)`.
pub fn gini(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("gini of an empty list"));
    }
    if values.iter().any(|&x| x < 0.0 || x.is_nan()) {
        return Err(Error::invalid("gini needs non-negative values"));
    }
    let total: f64 = values.iter().sum();
    if total == 0.0 {
        return Err(Error::invalid("gini of all-zero values"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (2.0 * (i as f64 + 1.0) - n - 1.0) * x)
        .sum();
    Ok(weighted / (n * total))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub curve: VisibilityCurve,
    pub gini: f64,
    /// Mean signed deviation of the curve from `f_m` (k < 100).
    pub inequity: f64,
}

pub fn rank_report(g: &AttributedGraph, metric: Metric) -> Result<RankReport> {
    let scores = metric_scores(g, metric)?;
    let ranking = rank_by_scores(&scores);
    let curve = visibility_from_ranking(g.labels(), &ranking, metric)?;
    Ok(RankReport {
        gini: gini(&scores)?,
        inequity: curve.inequity(),
        curve,
    })
}
