use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, Class, MixingMatrix};
use crate::rng::Rng;

use super::{EventKind, GenParams, GrowthTrace, Model, TraceEvent};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttachMode {
    /// `w_i = deg(i)`
    Pa,
    /// `w_i = H[newcomer][class_i] * deg(i)`
    Pah,
}

/// Unnormalized candidate weights. `fallback` is set when they sum to zero,
/// in which case the caller picks uniformly.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetWeights {
    pub weights: Vec<f64>,
    pub fallback: bool,
}

impl TargetWeights {
    /// Normalized pick probabilities (uniform under fallback).
    pub fn probabilities(&self) -> Vec<f64> {
        if self.fallback {
            let p = 1.0 / self.weights.len() as f64;
            return vec![p; self.weights.len()];
        }
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }
}

/// Attachment weights of an arriving node of class `newcomer` over the
/// `eligible` nodes of the current graph.
pub fn target_weights_undirected(
    state: &AttributedGraph,
    newcomer: Class,
    eligible: &[usize],
    mixing: &MixingMatrix,
    mode: AttachMode,
) -> Result<TargetWeights> {
    if eligible.is_empty() {
        return Err(Error::invalid("empty eligible set"));
    }
    let weights: Vec<f64> = eligible
        .iter()
        .map(|&i| {
            let d = state.degree(i) as f64;
            match mode {
                AttachMode::Pa => d,
                AttachMode::Pah => mixing.weight(newcomer, state.label(i)) * d,
            }
        })
        .collect();
    let fallback = weights.iter().sum::<f64>() == 0.0;
    Ok(TargetWeights { weights, fallback })
}

/// Mutable growth state: the graph plus a degree-multiplicity endpoint list
/// and per-class degree mass for O(1) expected weighted picks.
struct Growth<'a> {
    graph: AttributedGraph,
    endpoints: Vec<u32>,
    class_mass: [u64; 2],
    mixing: MixingMatrix,
    rng: &'a mut Rng,
}

impl Growth<'_> {
    fn connect(&mut self, u: usize, v: usize) -> Result<()> {
        let added = self.graph.add_edge(u, v)?;
        debug_assert!(added);
        self.endpoints.push(u as u32);
        self.endpoints.push(v as u32);
        self.class_mass[self.graph.label(u).index()] += 1;
        self.class_mass[self.graph.label(v).index()] += 1;
        Ok(())
    }

    /// Degree mass per class over `0..newcomer` minus already-chosen targets.
    fn eligible_mass(&self, newcomer: usize, chosen: &[usize]) -> [u64; 2] {
        let mut mass = self.class_mass;
        mass[self.graph.label(newcomer).index()] -= self.graph.degree(newcomer) as u64;
        for &c in chosen {
            mass[self.graph.label(c).index()] -= self.graph.degree(c) as u64;
        }
        mass
    }

    fn pah_pick(&mut self, newcomer: usize, chosen: &[usize]) -> (usize, EventKind) {
        let class = self.graph.label(newcomer);
        let mass = self.eligible_mass(newcomer, chosen);
        let total: f64 = Class::ALL
            .iter()
            .map(|&c| self.mixing.weight(class, c) * mass[c.index()] as f64)
            .sum();
        if total == 0.0 {
            return (
                self.uniform_pick(newcomer, chosen),
                EventKind::FallbackUniform,
            );
        }
        // Degree-proportional proposal from the endpoint list, accepted with
        // probability H[class][class_x] / max_row(H).
        let row_max = self.mixing.row_max(class);
        loop {
            let x = self.endpoints[self.rng.below(self.endpoints.len())] as usize;
            if x == newcomer || chosen.contains(&x) {
                continue;
            }
            let accept = self.mixing.weight(class, self.graph.label(x)) / row_max;
            if accept >= 1.0 || self.rng.next_f64() < accept {
                return (x, EventKind::PahPick);
            }
        }
    }

    fn uniform_pick(&mut self, newcomer: usize, chosen: &[usize]) -> usize {
        loop {
            let x = self.rng.below(newcomer);
            if !chosen.contains(&x) {
                return x;
            }
        }
    }

    /// Neighbors of already-chosen targets, excluding the newcomer and the
    /// chosen targets, in first-seen order.
    fn triadic_candidates(
        &self,
        newcomer: usize,
        chosen: &[usize],
        stamp: &mut [usize],
    ) -> Vec<usize> {
        let mut out = Vec::new();
        for &c in chosen {
            for &w in self.graph.neighbors(c) {
                if w != newcomer && stamp[w] != newcomer && !chosen.contains(&w) {
                    stamp[w] = newcomer;
                    out.push(w);
                }
            }
        }
        out
    }
}

pub(super) fn grow(
    params: &GenParams,
    labels: Vec<Class>,
    rng: &mut Rng,
) -> Result<(AttributedGraph, GrowthTrace)> {
    let n = params.n;
    let m = params.m;
    let p_tc = if params.model == Model::Patch {
        params.p_tc
    } else {
        0.0
    };
    let mut growth = Growth {
        graph: AttributedGraph::new(false, labels)?,
        endpoints: Vec::with_capacity(4 * n * m),
        class_mass: [0; 2],
        mixing: params.kernel_mixing(),
        rng,
    };
    for u in 0..m {
        for v in u + 1..m {
            growth.connect(u, v)?;
        }
    }
    let mut events = Vec::with_capacity((n - m) * m);
    let mut chosen = Vec::with_capacity(m);
    let mut stamp = vec![usize::MAX; n];
    for newcomer in m..n {
        chosen.clear();
        for j in 0..m {
            let mut pick = None;
            if j > 0 && growth.rng.bernoulli(p_tc) {
                let cands = growth.triadic_candidates(newcomer, &chosen, &mut stamp);
                if !cands.is_empty() {
                    let t = cands[growth.rng.below(cands.len())];
                    pick = Some((t, EventKind::TcPick));
                }
                // stamp must not leak into the next pick of this newcomer
                for &w in &cands {
                    stamp[w] = usize::MAX;
                }
            }
            let (target, kind) = match pick {
                Some(p) => p,
                None => growth.pah_pick(newcomer, &chosen),
            };
            growth.connect(newcomer, target)?;
            chosen.push(target);
            events.push(TraceEvent {
                source: newcomer,
                target,
                kind,
            });
        }
    }
    let trace = GrowthTrace {
        directed: false,
        n,
        seed_size: m,
        events,
    };
    Ok((growth.graph, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_pa, gen_pah, gen_patch, generate};

    fn path3() -> AttributedGraph {
        let mut g = AttributedGraph::new(false, vec![Class::Majority; 3]).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g
    }

    #[test]
    fn pa_weights_are_degrees() {
        let g = path3();
        let w = target_weights_undirected(
            &g,
            Class::Majority,
            &[0, 1, 2],
            &MixingMatrix::uniform(),
            AttachMode::Pa,
        )
        .unwrap();
        assert_eq!(w.weights, vec![1.0, 2.0, 1.0]);
        assert_eq!(w.probabilities(), vec![0.25, 0.5, 0.25]);
        assert!(!w.fallback);
    }

    #[test]
    fn neutral_pah_matches_pa() {
        let g = path3();
        let h = MixingMatrix::symmetric(0.5).unwrap();
        let pah = target_weights_undirected(&g, Class::Minority, &[0, 1, 2], &h, AttachMode::Pah)
            .unwrap();
        assert_eq!(pah.weights, vec![0.5, 1.0, 0.5]);
        assert_eq!(pah.probabilities(), vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn homophilic_pah_probabilities() {
        // candidates: node 1 (minority), node 2 (majority), both degree 3
        let mut g = AttributedGraph::new(
            false,
            vec![
                Class::Majority,
                Class::Minority,
                Class::Majority,
                Class::Majority,
                Class::Majority,
            ],
        )
        .unwrap();
        for (u, v) in [(1, 0), (1, 3), (1, 4), (2, 0), (2, 3), (2, 4)] {
            g.add_edge(u, v).unwrap();
        }
        let h = MixingMatrix::symmetric(0.8).unwrap();
        let w =
            target_weights_undirected(&g, Class::Minority, &[1, 2], &h, AttachMode::Pah).unwrap();
        let p = w.probabilities();
        assert!((p[0] - 0.8).abs() < 1e-12 && (p[1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn empty_eligible_is_rejected() {
        let g = path3();
        assert!(target_weights_undirected(
            &g,
            Class::Majority,
            &[],
            &MixingMatrix::uniform(),
            AttachMode::Pa
        )
        .is_err());
    }

    #[test]
    fn zero_weights_flag_fallback() {
        let g = AttributedGraph::new(false, vec![Class::Majority; 2]).unwrap();
        let w = target_weights_undirected(
            &g,
            Class::Majority,
            &[0],
            &MixingMatrix::uniform(),
            AttachMode::Pa,
        )
        .unwrap();
        assert!(w.fallback);
        assert_eq!(w.probabilities(), vec![1.0]);
    }

    #[test]
    fn pa_tree_and_edge_counts() {
        let (g, t) = gen_pa(5, 1, 3).unwrap();
        assert_eq!(g.edge_count(), 4);
        // m = 1 growth: every node after the first attaches exactly once
        assert!((1..5).all(|v| g.neighbors(v).iter().any(|&u| u < v)));
        assert_eq!(t.events[0].kind, EventKind::FallbackUniform);
        let (g, _) = gen_pa(100, 2, 3).unwrap();
        assert_eq!(g.edge_count(), 197);
        assert!(g.labels().iter().all(|&c| c == Class::Majority));
    }

    #[test]
    fn three_node_pa_first_pick_is_forced() {
        for seed in 0..20 {
            let (_, t) = gen_pa(3, 1, seed).unwrap();
            assert_eq!((t.events[0].source, t.events[0].target), (1, 0));
            assert_eq!(t.events[1].source, 2);
            assert_eq!(t.events[1].kind, EventKind::PahPick);
        }
    }

    #[test]
    fn rejects_bad_m_and_ptc() {
        assert!(gen_pa(5, 5, 1).is_err());
        assert!(gen_pa(5, 0, 1).is_err());
        let h = MixingMatrix::symmetric(0.5).unwrap();
        assert!(gen_patch(10, 2, 0.2, h, 1.5, 1).is_err());
    }

    #[test]
    fn extreme_homophily_separates_classes() {
        let (g, t) = gen_pah(1000, 2, 0.3, MixingMatrix::symmetric(1.0).unwrap(), 9).unwrap();
        for e in t
            .events
            .iter()
            .filter(|e| e.kind != EventKind::FallbackUniform)
        {
            assert_eq!(g.label(e.source), g.label(e.target));
        }
        let (g, t) = gen_pah(1000, 2, 0.3, MixingMatrix::symmetric(0.0).unwrap(), 9).unwrap();
        for e in t
            .events
            .iter()
            .filter(|e| e.kind != EventKind::FallbackUniform)
        {
            assert_ne!(g.label(e.source), g.label(e.target));
        }
    }

    #[test]
    fn neutral_pah_trace_equals_pa_trace() {
        for seed in 0..5 {
            let (_, pa) = generate(&GenParams::pa(300, 2, seed).with_f_m(0.3)).unwrap();
            let (_, pah) =
                gen_pah(300, 2, 0.3, MixingMatrix::symmetric(0.5).unwrap(), seed).unwrap();
            assert_eq!(pa.events, pah.events);
        }
    }

    #[test]
    fn patch_without_closure_is_pah() {
        let h = MixingMatrix::symmetric(0.7).unwrap();
        let (_, pah) = gen_pah(300, 3, 0.2, h, 4).unwrap();
        let (_, patch) = gen_patch(300, 3, 0.2, h, 0.0, 4).unwrap();
        assert_eq!(pah.events, patch.events);
        assert_eq!(patch.count_kind(EventKind::TcPick), 0);
    }

    #[test]
    fn triadic_picks_close_triangles() {
        let h = MixingMatrix::symmetric(0.5).unwrap();
        let (g, t) = gen_patch(500, 2, 0.2, h, 1.0, 8).unwrap();
        let tc: Vec<_> = t
            .events
            .iter()
            .filter(|e| e.kind == EventKind::TcPick)
            .collect();
        assert!(!tc.is_empty());
        for pair in t.events.chunks(2) {
            if pair[1].kind == EventKind::TcPick {
                assert!(g.has_edge(pair[0].target, pair[1].target));
            }
        }
    }

    #[test]
    fn generation_is_seeded() {
        let p = GenParams::patch(400, 2, 0.2, MixingMatrix::symmetric(0.8).unwrap(), 0.5, 77);
        let a = generate(&p).unwrap();
        let b = generate(&p).unwrap();
        assert_eq!(a, b);
        let c = generate(&GenParams { seed: 78, ..p }).unwrap();
        assert_ne!(a.1, c.1);
    }

    #[test]
    fn replay_rebuilds_graph() {
        for seed in 0..10 {
            let p = GenParams::patch(
                200,
                1 + (seed as usize % 3),
                0.3,
                MixingMatrix::symmetric(0.7).unwrap(),
                0.5,
                seed,
            );
            let (g, t) = generate(&p).unwrap();
            assert_eq!(t.replay(g.labels()).unwrap(), g);
            let reread = GrowthTrace::from_events(false, t.n, t.events.clone());
            assert_eq!(reread.seed_size, t.seed_size);
        }
    }
}
