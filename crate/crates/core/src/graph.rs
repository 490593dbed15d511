//! Attributed graph data model, class labels and the mixing matrix.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Binary node class. The minority is always class 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Majority = 0,
    Minority = 1,
}

impl Class {
    pub const ALL: [Class; 2] = [Class::Majority, Class::Minority];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Class> {
        match i {
            0 => Some(Class::Majority),
            1 => Some(Class::Minority),
            _ => None,
        }
    }

    pub fn other(self) -> Class {
        match self {
            Class::Majority => Class::Minority,
            Class::Minority => Class::Majority,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// 2×2 affinity matrix: `weight(a, b)` is the affinity of a class-`a`
/// source for a class-`b` target.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixingMatrix {
    entries: [[f64; 2]; 2],
}

impl MixingMatrix {
    pub fn new(entries: [[f64; 2]; 2]) -> Result<Self> {
        for row in &entries {
            for &x in row {
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::invalid(format!(
                        "mixing matrix entry {x} outside [0, 1]"
                    )));
                }
            }
        }
        Ok(MixingMatrix { entries })
    }

    /// `H[a][a] = h`, `H[a][b] = 1 - h`.
    pub fn symmetric(h: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&h) {
            return Err(Error::invalid(format!("homophily {h} outside [0, 1]")));
        }
        Ok(MixingMatrix {
            entries: [[h, 1.0 - h], [1.0 - h, h]],
        })
    }

    /// All-ones matrix: class-blind attachment.
    pub fn uniform() -> Self {
        MixingMatrix {
            entries: [[1.0; 2]; 2],
        }
    }

    #[inline]
    pub fn weight(&self, source: Class, target: Class) -> f64 {
        self.entries[source.index()][target.index()]
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.entries
    }

    /// Largest affinity in the row of `source`.
    pub fn row_max(&self, source: Class) -> f64 {
        let row = self.entries[source.index()];
        row[0].max(row[1])
    }
}

/// Per-node degree counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degrees {
    Undirected(Vec<usize>),
    Directed {
        indeg: Vec<usize>,
        outdeg: Vec<usize>,
    },
}

/// Simple graph (directed or undirected) with a class label per node.
///
/// Adjacency lists are kept sorted ascending, so neighbor iteration is in
/// node-id order. For undirected graphs `in_adj` is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttributedGraph {
    directed: bool,
    labels: Vec<Class>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    edge_set: HashSet<(u32, u32)>,
}

impl AttributedGraph {
    pub fn new(directed: bool, labels: Vec<Class>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::invalid("graph needs at least one node"));
        }
        if labels.len() > u32::MAX as usize {
            return Err(Error::invalid("too many nodes"));
        }
        let n = labels.len();
        Ok(AttributedGraph {
            directed,
            labels,
            out_adj: vec![Vec::new(); n],
            in_adj: if directed {
                vec![Vec::new(); n]
            } else {
                Vec::new()
            },
            edge_set: HashSet::new(),
        })
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_set.len()
    }

    pub fn labels(&self) -> &[Class] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, v: usize) -> Class {
        self.labels[v]
    }

    /// Replaces all labels; node and edge sets are untouched.
    pub fn relabel(&mut self, labels: Vec<Class>) -> Result<()> {
        if labels.len() != self.labels.len() {
            return Err(Error::invalid(format!(
                "expected {} labels, got {}",
                self.labels.len(),
                labels.len()
            )));
        }
        self.labels = labels;
        Ok(())
    }

    /// Number of nodes per class, indexed by [`Class::index`].
    pub fn class_counts(&self) -> [usize; 2] {
        let mut counts = [0; 2];
        for c in &self.labels {
            counts[c.index()] += 1;
        }
        counts
    }

    fn key(&self, u: usize, v: usize) -> (u32, u32) {
        if self.directed || u < v {
            (u as u32, v as u32)
        } else {
            (v as u32, u as u32)
        }
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.labels.len() {
            return Err(Error::invalid(format!(
                "node id {v} out of range for n = {}",
                self.labels.len()
            )));
        }
        Ok(())
    }

    /// Inserts `u -> v` (or `{u, v}`). Returns `false` for self-loops and
    /// already-present edges.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v || !self.edge_set.insert(self.key(u, v)) {
            return Ok(false);
        }
        insert_sorted(&mut self.out_adj[u], v);
        if self.directed {
            insert_sorted(&mut self.in_adj[v], u);
        } else {
            insert_sorted(&mut self.out_adj[v], u);
        }
        Ok(true)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.labels.len() && v < self.labels.len() && self.edge_set.contains(&self.key(u, v))
    }

    /// Out-neighbors (directed) or neighbors (undirected), ascending.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    /// In-neighbors (directed) or neighbors (undirected), ascending.
    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        if self.directed {
            &self.in_adj[v]
        } else {
            &self.out_adj[v]
        }
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.in_neighbors(v).len()
    }

    /// Undirected degree, or in + out degree for directed graphs.
    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        if self.directed {
            self.out_adj[v].len() + self.in_adj[v].len()
        } else {
            self.out_adj[v].len()
        }
    }

    pub fn degree_vector(&self) -> Degrees {
        let n = self.node_count();
        if self.directed {
            Degrees::Directed {
                indeg: (0..n).map(|v| self.in_degree(v)).collect(),
                outdeg: (0..n).map(|v| self.out_degree(v)).collect(),
            }
        } else {
            Degrees::Undirected((0..n).map(|v| self.degree(v)).collect())
        }
    }

    /// Edges in lexicographic order; undirected edges as `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let directed = self.directed;
        self.out_adj.iter().enumerate().flat_map(move |(u, nbrs)| {
            nbrs.iter()
                .copied()
                .filter(move |&v| directed || u < v)
                .map(move |v| (u, v))
        })
    }

    /// Mean local clustering coefficient, treating edges as undirected.
    /// Nodes of degree < 2 contribute 0.
    pub fn average_clustering(&self) -> f64 {
        let n = self.node_count();
        let nbrs: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                if self.directed {
                    merge_unique(&self.out_adj[v], &self.in_adj[v])
                } else {
                    self.out_adj[v].clone()
                }
            })
            .collect();
        let mut mark = vec![usize::MAX; n];
        let mut total = 0.0;
        for v in 0..n {
            let nv = &nbrs[v];
            let k = nv.len();
            if k < 2 {
                continue;
            }
            for &u in nv {
                mark[u] = v;
            }
            let mut links = 0usize;
            for &u in nv {
                links += nbrs[u].iter().filter(|&&w| mark[w] == v).count();
            }
            // each link counted from both ends
            total += links as f64 / (k * (k - 1)) as f64;
        }
        total / n as f64
    }
}

fn insert_sorted(list: &mut Vec<usize>, v: usize) {
    let pos = list.binary_search(&v).unwrap_or_else(|p| p);
    list.insert(pos, v);
}

fn merge_unique(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Number of minority nodes for `n` nodes at fraction `f_m`:
/// `round(n * f_m)` with ties rounded to even.
pub fn minority_count(n: usize, f_m: f64) -> usize {
    (n as f64 * f_m).round_ties_even() as usize
}

/// Exactly `round(n * f_m)` minority labels (ties to even), positions
/// shuffled uniformly.
pub fn assign_classes(n: usize, f_m: f64, rng: &mut Rng) -> Result<Vec<Class>> {
    if n == 0 {
        return Err(Error::invalid("need at least one node"));
    }
    if !(0.0..=0.5).contains(&f_m) {
        return Err(Error::invalid(format!(
            "minority fraction {f_m} outside [0, 0.5]"
        )));
    }
    let k = minority_count(n, f_m);
    let mut labels: Vec<Class> = (0..n)
        .map(|i| {
            if i < k {
                Class::Minority
            } else {
                Class::Majority
            }
        })
        .collect();
    rng.shuffle(&mut labels);
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn zeros(n: usize) -> Vec<Class> {
        vec![Class::Majority; n]
    }

    #[test]
    fn new_graph_examples() {
        let g = AttributedGraph::new(false, vec![Class::Majority, Class::Minority]).unwrap();
        assert!(!g.is_directed());
        assert_eq!((g.node_count(), g.edge_count()), (2, 0));
        let g = AttributedGraph::new(
            true,
            vec![Class::Majority, Class::Majority, Class::Minority],
        )
        .unwrap();
        assert!(g.is_directed());
        assert_eq!((g.node_count(), g.edge_count()), (3, 0));
        assert!(matches!(
            AttributedGraph::new(false, vec![]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn add_edge_examples() {
        let mut g = AttributedGraph::new(false, zeros(2)).unwrap();
        assert!(g.add_edge(0, 1).unwrap());
        assert_eq!(g.edge_count(), 1);
        assert!(!g.add_edge(1, 0).unwrap());
        assert!(!g.add_edge(0, 0).unwrap());
        assert_eq!(g.edge_count(), 1);
        assert!(g.add_edge(0, 2).is_err());
    }

    #[test]
    fn directed_edges_are_ordered() {
        let mut g = AttributedGraph::new(true, zeros(2)).unwrap();
        assert!(g.add_edge(0, 1).unwrap());
        assert!(g.add_edge(1, 0).unwrap());
        assert!(!g.add_edge(0, 1).unwrap());
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn assign_classes_examples() {
        let mut rng = Rng::new(11);
        let l = assign_classes(10, 0.2, &mut rng).unwrap();
        assert_eq!(l.iter().filter(|&&c| c == Class::Minority).count(), 2);
        let l = assign_classes(10, 0.0, &mut rng).unwrap();
        assert!(l.iter().all(|&c| c == Class::Majority));
        let l = assign_classes(5, 0.5, &mut rng).unwrap();
        assert_eq!(l.iter().filter(|&&c| c == Class::Minority).count(), 2);
        assert!(assign_classes(10, 0.6, &mut rng).is_err());
        assert!(assign_classes(10, -0.1, &mut rng).is_err());
        assert!(assign_classes(0, 0.1, &mut rng).is_err());
    }

    #[test]
    fn half_to_even_rounding_by_enumeration() {
        // n * 0.5 for odd n is an exact .5 tie; even rounding alternates.
        for n in 1..=21usize {
            let expected = if (n / 2) % 2 == 0 || n % 2 == 0 {
                n / 2
            } else {
                n / 2 + 1
            };
            assert_eq!(minority_count(n, 0.5), expected, "n = {n}");
        }
    }

    #[test]
    fn assign_classes_is_seeded() {
        let a = assign_classes(100, 0.3, &mut Rng::new(5)).unwrap();
        let b = assign_classes(100, 0.3, &mut Rng::new(5)).unwrap();
        let c = assign_classes(100, 0.3, &mut Rng::new(6)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn degree_vector_examples() {
        let mut g = AttributedGraph::new(false, zeros(3)).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        assert_eq!(g.degree_vector(), Degrees::Undirected(vec![1, 2, 1]));

        let mut d = AttributedGraph::new(true, zeros(2)).unwrap();
        d.add_edge(0, 1).unwrap();
        assert_eq!(
            d.degree_vector(),
            Degrees::Directed {
                indeg: vec![0, 1],
                outdeg: vec![1, 0]
            }
        );
        let e = AttributedGraph::new(false, zeros(4)).unwrap();
        assert_eq!(e.degree_vector(), Degrees::Undirected(vec![0; 4]));
    }

    #[test]
    fn mixing_matrix() {
        let h = MixingMatrix::symmetric(0.8).unwrap();
        assert_eq!(h.weight(Class::Minority, Class::Minority), 0.8);
        assert!((h.weight(Class::Minority, Class::Majority) - 0.2).abs() < 1e-15);
        assert!(MixingMatrix::symmetric(1.1).is_err());
        assert!(MixingMatrix::new([[0.5, 1.5], [0.0, 0.0]]).is_err());
    }

    #[test]
    fn clustering_of_triangle_and_star() {
        let mut g = AttributedGraph::new(false, zeros(3)).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(0, 2).unwrap();
        assert!((g.average_clustering() - 1.0).abs() < 1e-12);
        let mut s = AttributedGraph::new(false, zeros(4)).unwrap();
        for leaf in 1..4 {
            s.add_edge(0, leaf).unwrap();
        }
        assert_eq!(s.average_clustering(), 0.0);
    }

    proptest! {
        #[test]
        fn simple_graph_and_degree_consistency(
            directed in any::<bool>(),
            n in 1usize..50,
            ops in proptest::collection::vec((0usize..50, 0usize..50), 0..300),
        ) {
            let mut g = AttributedGraph::new(directed, zeros(n)).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for (u, v) in ops {
                let (u, v) = (u % n, v % n);
                let key = if directed || u < v { (u, v) } else { (v, u) };
                let fresh = u != v && seen.insert(key);
                prop_assert_eq!(g.add_edge(u, v).unwrap(), fresh);
            }
            // brute-force re-scan of the edge list
            let listed: Vec<_> = g.edges().collect();
            prop_assert_eq!(listed.len(), seen.len());
            prop_assert!(listed.iter().all(|&(u, v)| u != v));
            prop_assert_eq!(listed.iter().copied().collect::<std::collections::BTreeSet<_>>(), seen.clone());
            match g.degree_vector() {
                Degrees::Undirected(d) => {
                    let mut rec = vec![0; n];
                    for &(u, v) in &seen { rec[u] += 1; rec[v] += 1; }
                    prop_assert_eq!(d.iter().sum::<usize>(), 2 * seen.len());
                    prop_assert_eq!(d, rec);
                }
                Degrees::Directed { indeg, outdeg } => {
                    prop_assert_eq!(indeg.iter().sum::<usize>(), seen.len());
                    prop_assert_eq!(outdeg.iter().sum::<usize>(), seen.len());
                    let mut rin = vec![0; n];
                    let mut rout = vec![0; n];
                    for &(u, v) in &seen { rout[u] += 1; rin[v] += 1; }
                    prop_assert_eq!(indeg, rin);
                    prop_assert_eq!(outdeg, rout);
                }
            }
        }
    }
}
