//! Straightforward growth-replay likelihood used as a reference.
//!
//! Deliberately naive: the graph lives in an adjacency matrix, and every
//! event rebuilds its candidate list and weights from scratch using nothing
//! but the kernel definitions.

#![allow(dead_code)]

use socnet::{Class, EventKind, GrowthTrace, Model};

struct State {
    n: usize,
    adj: Vec<Vec<bool>>,
    deg: Vec<usize>,
    indeg: Vec<usize>,
    directed: bool,
}

impl State {
    fn new(n: usize, directed: bool) -> Self {
        State {
            n,
            adj: vec![vec![false; n]; n],
            deg: vec![0; n],
            indeg: vec![0; n],
            directed,
        }
    }

    fn add(&mut self, u: usize, v: usize) {
        self.adj[u][v] = true;
        self.indeg[v] += 1;
        self.deg[u] += 1;
        self.deg[v] += 1;
        if !self.directed {
            self.adj[v][u] = true;
        }
    }

    fn degree(&self, v: usize) -> usize {
        self.deg[v]
    }

    fn in_degree(&self, v: usize) -> usize {
        self.indeg[v]
    }
}

fn h_weight(h: f64, a: Class, b: Class) -> f64 {
    if a == b {
        h
    } else {
        1.0 - h
    }
}

/// Log-likelihood of a trace under `model` with symmetric homophily `h` and
/// triadic-closure probability `p_tc`.
pub fn loglik(trace: &GrowthTrace, labels: &[Class], model: Model, h: f64, p_tc: f64) -> f64 {
    if trace.directed {
        directed(trace, labels, model, h)
    } else {
        undirected(trace, labels, model, h, p_tc)
    }
}

fn undirected(trace: &GrowthTrace, labels: &[Class], model: Model, h: f64, p_tc: f64) -> f64 {
    let mut g = State::new(trace.n, false);
    for u in 0..trace.seed_size {
        for v in u + 1..trace.seed_size {
            g.add(u, v);
        }
    }
    let mut total = 0.0;
    let mut chosen: Vec<usize> = Vec::new();
    let mut current = usize::MAX;
    for e in &trace.events {
        if e.source != current {
            current = e.source;
            chosen.clear();
        }
        let s = e.source;
        let eligible: Vec<usize> = (0..s).filter(|v| !chosen.contains(v)).collect();
        if e.kind == EventKind::FallbackUniform {
            total += (1.0 / eligible.len() as f64).ln();
        } else {
            let weight = |v: usize| {
                let k = g.degree(v) as f64;
                match model {
                    Model::Pa => k,
                    _ => h_weight(h, labels[s], labels[v]) * k,
                }
            };
            let sum: f64 = eligible.iter().map(|&v| weight(v)).sum();
            let p_pah = if sum > 0.0 {
                weight(e.target) / sum
            } else {
                0.0
            };
            let mut p = p_pah;
            if model == Model::Patch && !chosen.is_empty() {
                let mut tri: Vec<usize> = Vec::new();
                for &c in &chosen {
                    for v in 0..trace.n {
                        if g.adj[c][v] && v != s && !chosen.contains(&v) && !tri.contains(&v) {
                            tri.push(v);
                        }
                    }
                }
                if !tri.is_empty() {
                    let p_tri = if tri.contains(&e.target) {
                        1.0 / tri.len() as f64
                    } else {
                        0.0
                    };
                    p = p_tc * p_tri + (1.0 - p_tc) * p_pah;
                }
            }
            total += p.ln();
        }
        g.add(s, e.target);
        chosen.push(e.target);
    }
    total
}

fn directed(trace: &GrowthTrace, labels: &[Class], model: Model, h: f64) -> f64 {
    let mut g = State::new(trace.n, true);
    let mut total = 0.0;
    for e in &trace.events {
        let s = e.source;
        let weight = |t: usize| {
            let pref = g.in_degree(t) as f64 + 1.0;
            match model {
                Model::Dpa => pref,
                Model::Dh => h_weight(h, labels[s], labels[t]),
                _ => h_weight(h, labels[s], labels[t]) * pref,
            }
        };
        let sum: f64 = (0..trace.n)
            .filter(|&t| t != s && !g.adj[s][t])
            .map(weight)
            .sum();
        total += (weight(e.target) / sum).ln();
        g.add(s, e.target);
    }
    total
}
