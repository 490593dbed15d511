use crate::graph::{AttributedGraph, Class};

/// Edge counts by class pair.
///
/// Undirected edges are unordered, so they are stored as same-class counts
/// per class plus one cross-class count. Directed edges are counted by
/// `[class_source][class_target]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MixingCounts {
    Undirected { same: [usize; 2], cross: usize },
    Directed([[usize; 2]; 2]),
}

impl MixingCounts {
    pub fn total(&self) -> usize {
        match self {
            MixingCounts::Undirected { same, cross } => same[0] + same[1] + cross,
            MixingCounts::Directed(c) => c.iter().flatten().sum(),
        }
    }

    pub fn same_class(&self) -> usize {
        match self {
            MixingCounts::Undirected { same, .. } => same[0] + same[1],
            MixingCounts::Directed(c) => c[0][0] + c[1][1],
        }
    }

    /// Symmetric homophily estimate: share of same-class edges. `None` for
    /// an edgeless graph.
    pub fn homophily_estimate(&self) -> Option<f64> {
        let total = self.total();
        (total > 0).then(|| self.same_class() as f64 / total as f64)
    }

    /// Per-class descriptive estimate: share of a class's edge ends
    /// (undirected) or out-edges (directed) that land in the same class.
    pub fn class_homophily(&self, class: Class) -> Option<f64> {
        let c = class.index();
        let (num, den) = match self {
            MixingCounts::Undirected { same, cross } => (2 * same[c], 2 * same[c] + cross),
            MixingCounts::Directed(m) => (m[c][c], m[c][0] + m[c][1]),
        };
        (den > 0).then(|| num as f64 / den as f64)
    }
}

pub fn mixing_counts(g: &AttributedGraph) -> MixingCounts {
    if g.is_directed() {
        let mut m = [[0; 2]; 2];
        for (s, t) in g.edges() {
            m[g.label(s).index()][g.label(t).index()] += 1;
        }
        MixingCounts::Directed(m)
    } else {
        let mut same = [0; 2];
        let mut cross = 0;
        for (u, v) in g.edges() {
            let (a, b) = (g.label(u), g.label(v));
            if a == b {
                same[a.index()] += 1;
            } else {
                cross += 1;
            }
        }
        MixingCounts::Undirected { same, cross }
    }
}
