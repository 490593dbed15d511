use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Class, MixingMatrix};
use crate::rng::Rng;

use super::undirected::TargetWeights;
use super::{EventKind, GenParams, GrowthTrace, Model, TraceEvent, MAX_SOURCE_FAILURES};

/// Kernel value of target `t` for source `s`:
/// DPA `indeg(t) + 1`, DH `H[s][t]`, DPAH `H[s][t] * (indeg(t) + 1)`.
pub fn directed_edge_target(
    g: &AttributedGraph,
    model: Model,
    mixing: &MixingMatrix,
    s: usize,
    t: usize,
) -> f64 {
    let pref = g.in_degree(t) as f64 + 1.0;
    let aff = mixing.weight(g.label(s), g.label(t));
    match model {
        Model::Dpa => pref,
        Model::Dh => aff,
        _ => aff * pref,
    }
}

/// Target weights for source `s` over `{t != s, (s, t) absent}`. Returns the
/// eligible ids alongside the weights.
pub fn target_weights_directed(
    g: &AttributedGraph,
    model: Model,
    mixing: &MixingMatrix,
    s: usize,
) -> Result<(Vec<usize>, TargetWeights)> {
    if !model.is_directed() {
        return Err(Error::invalid(format!("{model} is not a directed model")));
    }
    let eligible: Vec<usize> = (0..g.node_count())
        .filter(|&t| t != s && !g.has_edge(s, t))
        .collect();
    let weights: Vec<f64> = eligible
        .iter()
        .map(|&t| directed_edge_target(g, model, mixing, s, t))
        .collect();
    let fallback = weights.iter().sum::<f64>() == 0.0;
    Ok((eligible, TargetWeights { weights, fallback }))
}

struct Placement<'a> {
    graph: AttributedGraph,
    model: Model,
    mixing: MixingMatrix,
    preferential: bool,
    class_nodes: [Vec<u32>; 2],
    /// Targets with in-degree multiplicity, per class.
    in_endpoints: [Vec<u32>; 2],
    rng: &'a mut Rng,
}

impl Placement<'_> {
    fn base(&self, t: usize) -> u64 {
        if self.preferential {
            self.graph.in_degree(t) as u64 + 1
        } else {
            1
        }
    }

    fn class_total(&self, c: usize) -> u64 {
        let mut total = self.class_nodes[c].len() as u64;
        if self.preferential {
            total += self.in_endpoints[c].len() as u64;
        }
        total
    }

    /// Kernel mass per target class over the eligible set of `s`.
    fn eligible_mass(&self, s: usize) -> [u64; 2] {
        let mut mass = [self.class_total(0), self.class_total(1)];
        mass[self.graph.label(s).index()] -= self.base(s);
        for &t in self.graph.neighbors(s) {
            mass[self.graph.label(t).index()] -= self.base(t);
        }
        mass
    }

    /// Draws a target for `s`, or `None` when no admissible target has
    /// positive weight.
    fn pick_target(&mut self, s: usize) -> Option<usize> {
        let cs = self.graph.label(s);
        let mass = self.eligible_mass(s);
        let w = [
            self.mixing.weight(cs, Class::Majority) * mass[0] as f64,
            self.mixing.weight(cs, Class::Minority) * mass[1] as f64,
        ];
        let total = w[0] + w[1];
        if total <= 0.0 {
            return None;
        }
        let u = self.rng.next_f64() * total;
        let mut c = if u < w[0] { 0 } else { 1 };
        if w[c] <= 0.0 {
            c = 1 - c;
        }
        let nodes = self.class_nodes[c].len();
        let span = self.class_total(c) as usize;
        loop {
            let r = self.rng.below(span);
            let t = if r < nodes {
                self.class_nodes[c][r]
            } else {
                self.in_endpoints[c][r - nodes]
            } as usize;
            if t != s && !self.graph.has_edge(s, t) {
                return Some(t);
            }
        }
    }
}

pub(super) fn grow(
    params: &GenParams,
    labels: Vec<Class>,
    activity: &[f64],
    rng: &mut Rng,
) -> Result<(AttributedGraph, GrowthTrace)> {
    let n = params.n;
    let target = params.target_edges();
    if target > n * (n - 1) {
        return Err(Error::invalid(format!(
            "target of {target} edges exceeds n(n-1) = {}",
            n * (n - 1)
        )));
    }
    let mut class_nodes: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
    for (v, c) in labels.iter().enumerate() {
        class_nodes[c.index()].push(v as u32);
    }
    let mut cumulative = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &a in activity {
        acc += a;
        cumulative.push(acc);
    }
    let mut place = Placement {
        graph: AttributedGraph::new(true, labels)?,
        model: params.model,
        mixing: params.kernel_mixing(),
        preferential: params.model != Model::Dh,
        class_nodes,
        in_endpoints: [Vec::new(), Vec::new()],
        rng,
    };
    debug_assert!(place.model.is_directed());
    let mut events = Vec::with_capacity(target);
    let mut failures = 0;
    while events.len() < target {
        let u = place.rng.next_f64() * acc;
        let s = cumulative.partition_point(|&c| c <= u).min(n - 1);
        match place.pick_target(s) {
            Some(t) => {
                failures = 0;
                place.graph.add_edge(s, t)?;
                let ct = place.graph.label(t).index();
                place.in_endpoints[ct].push(t as u32);
                events.push(TraceEvent {
                    source: s,
                    target: t,
                    kind: EventKind::DirectedPick,
                });
            }
            None => {
                failures += 1;
                if failures >= MAX_SOURCE_FAILURES {
                    return Err(Error::Saturation {
                        placed: events.len(),
                        target,
                        failures,
                    });
                }
            }
        }
    }
    let trace = GrowthTrace {
        directed: true,
        n,
        seed_size: 0,
        events,
    };
    Ok((place.graph, trace))
}
