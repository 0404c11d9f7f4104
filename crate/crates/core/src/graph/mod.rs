//! Finite simple graphs, contextual hypergraphs, and the structural
//! operations the invariants are built on: complement, strong product,
//! maximal clique and independent set enumeration.

mod cliques;
mod io;
mod vertex_set;

pub use cliques::{maximal_cliques, maximal_independent_sets};
pub use io::{parse_graph, parse_hypergraph};
pub use vertex_set::VertexSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected loopless graph on vertices `0..n` with dense bitmask rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    rows: Vec<VertexSet>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidInput("a graph needs at least one vertex".into()));
        }
        let mut rows = vec![VertexSet::new(n); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("loop at vertex {u}")));
            }
            rows[u].insert(v);
            rows[v].insert(u);
        }
        Ok(Self { rows, labels: None })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, [])
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("cycle needs n >= 3, got {n}")));
        }
        Self::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::from_edges(n, (1..n).map(|u| (u - 1, u)))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::Dimension(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter()
            .all(|v| set.difference(&self.rows[v]).to_vec() == [v])
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| !self.rows[v].intersects(set))
    }

    /// Graph on the same vertices with exactly the missing non-loop edges.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let rows = (0..n)
            .map(|v| {
                let mut row = VertexSet::full(n).difference(&self.rows[v]);
                row.remove(v);
                row
            })
            .collect();
        Graph {
            rows,
            labels: self.labels.clone(),
        }
    }

    /// Strong product. Vertex `(u, v)` is numbered `u * other.n() + v`.
    pub fn strong_product(&self, other: &Graph) -> Graph {
        let (n1, n2) = (self.n(), other.n());
        let n = n1 * n2;
        let closed = |g: &Graph, v: usize| {
            let mut s = g.rows[v].clone();
            s.insert(v);
            s
        };
        let mut rows = Vec::with_capacity(n);
        for u in 0..n1 {
            let nu = closed(self, u);
            for v in 0..n2 {
                let nv = closed(other, v);
                let mut row = VertexSet::new(n);
                for a in &nu {
                    for b in &nv {
                        if (a, b) != (u, v) {
                            row.insert(a * n2 + b);
                        }
                    }
                }
                rows.push(row);
            }
        }
        let labels = match (&self.labels, &other.labels) {
            (Some(l1), Some(l2)) => Some(
                l1.iter()
                    .flat_map(|a| l2.iter().map(move |b| format!("({a},{b})")))
                    .collect(),
            ),
            _ => None,
        };
        Graph { rows, labels }
    }

    /// `k`-fold strong power, refused when `n^k` exceeds `budget`.
    pub fn strong_power(&self, k: usize, budget: usize) -> Result<Graph> {
        if k == 0 {
            return Err(Error::InvalidInput("strong power level must be >= 1".into()));
        }
        let required = power_size(self.n(), k);
        if required > budget as u128 {
            return Err(Error::Budget { required, budget });
        }
        let mut g = self.clone();
        for _ in 1..k {
            g = g.strong_product(self);
        }
        Ok(g)
    }
}

/// `n^k` saturating at `u128::MAX`.
pub fn power_size(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, _| acc.saturating_mul(n as u128))
}

/// Contextual scenario: vertices `0..n` and hyperedges (complete measurements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<VertexSet>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct HypergraphJson {
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Every edge must be non-empty with in-range, distinct vertices, and
    /// every vertex must lie in some edge.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("a scenario needs at least one vertex".into()));
        }
        let mut sets = Vec::with_capacity(edges.len());
        let mut covered = VertexSet::new(n);
        for (i, e) in edges.iter().enumerate() {
            if e.is_empty() {
                return Err(Error::InvalidInput(format!("hyperedge {i} is empty")));
            }
            let mut s = VertexSet::new(n);
            for &v in e {
                if v >= n {
                    return Err(Error::InvalidInput(format!(
                        "hyperedge {i} names vertex {v}, scenario has {n}"
                    )));
                }
                if s.contains(v) {
                    return Err(Error::InvalidInput(format!(
                        "hyperedge {i} repeats vertex {v}"
                    )));
                }
                s.insert(v);
            }
            covered = covered.union(&s);
            sets.push(s);
        }
        if let Some(v) = VertexSet::full(n).difference(&covered).first() {
            return Err(Error::InvalidInput(format!(
                "vertex {v} belongs to no hyperedge"
            )));
        }
        Ok(Self { n, edges: sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(HypergraphJson {
            n: self.n,
            edges: self.edges.iter().map(VertexSet::to_vec).collect(),
        })
        .expect("hypergraph serializes")
    }
}

/// Non-orthogonality graph: distinct vertices are adjacent iff no
/// hyperedge contains both.
pub fn no_graph(h: &Hypergraph) -> Graph {
    let n = h.n();
    let rows = (0..n)
        .map(|u| {
            let mut shared = VertexSet::new(n);
            for e in h.edges().iter().filter(|e| e.contains(u)) {
                shared = shared.union(e);
            }
            shared.insert(u);
            VertexSet::full(n).difference(&shared)
        })
        .collect();
    Graph { rows, labels: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degree_sequence(g: &Graph) -> Vec<usize> {
        let mut d: Vec<_> = (0..g.n()).map(|v| g.degree(v)).collect();
        d.sort_unstable();
        d
    }

    #[test]
    fn complement_of_c5_is_a_5_cycle() {
        let c = Graph::cycle(5).unwrap().complement();
        assert_eq!(c.edge_count(), 5);
        assert_eq!(degree_sequence(&c), vec![2; 5]);
        // 0-2-4-1-3-0
        for (u, v) in [(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)] {
            assert!(c.is_adjacent(u, v));
        }
    }

    #[test]
    fn complement_of_complete_is_empty() {
        assert_eq!(Graph::complete(3).unwrap().complement(), Graph::empty(3).unwrap());
    }

    #[test]
    fn complement_is_involutive_on_p4() {
        let p4 = Graph::path(4).unwrap();
        assert_eq!(p4.complement().complement(), p4);
    }

    #[test]
    fn strong_product_with_k1_is_identity() {
        let g = Graph::path(4).unwrap();
        assert_eq!(Graph::complete(1).unwrap().strong_product(&g), g);
        assert_eq!(g.strong_product(&Graph::complete(1).unwrap()), g);
    }

    #[test]
    fn c5_strong_square_has_100_edges() {
        let c5 = Graph::cycle(5).unwrap();
        let sq = c5.strong_product(&c5);
        assert_eq!(sq.n(), 25);
        assert_eq!(sq.edge_count(), 100);
        assert!((0..25).all(|v| sq.degree(v) == 8));
    }

    #[test]
    fn strong_product_matches_three_clause_rule() {
        let g1 = Graph::path(3).unwrap();
        let g2 = Graph::cycle(4).unwrap();
        let p = g1.strong_product(&g2);
        for (u1, v1, u2, v2) in itertools4(3, 4) {
            let a = u1 * 4 + v1;
            let b = u2 * 4 + v2;
            let expected = (g1.is_adjacent(u1, u2) && g2.is_adjacent(v1, v2))
                || (g1.is_adjacent(u1, u2) && v1 == v2)
                || (u1 == u2 && g2.is_adjacent(v1, v2));
            assert_eq!(p.is_adjacent(a, b), expected, "({u1},{v1}) ~ ({u2},{v2})");
        }
    }

    fn itertools4(n1: usize, n2: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for u1 in 0..n1 {
            for v1 in 0..n2 {
                for u2 in 0..n1 {
                    for v2 in 0..n2 {
                        out.push((u1, v1, u2, v2));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn k2_strong_square_is_k4() {
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(k2.strong_product(&k2), Graph::complete(4).unwrap());
    }

    #[test]
    fn strong_powers() {
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(c5.strong_power(1, 100).unwrap(), c5);
        assert_eq!(c5.strong_power(2, 100).unwrap(), c5.strong_product(&c5));
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(k2.strong_power(3, 100).unwrap(), Graph::complete(8).unwrap());
        assert!(matches!(
            c5.strong_power(9, 4096),
            Err(Error::Budget { required: 1_953_125, budget: 4096 })
        ));
        assert!(c5.strong_power(0, 100).is_err());
    }

    #[test]
    fn rejects_loops_and_empty_graphs() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(0, []).is_err());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn no_graph_examples() {
        let h = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(no_graph(&h), Graph::empty(2).unwrap());

        let tri = Hypergraph::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(no_graph(&tri), Graph::empty(3).unwrap());

        let h = Hypergraph::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(no_graph(&h), Graph::from_edges(3, [(0, 2), (1, 2)]).unwrap());
    }

    #[test]
    fn hypergraph_validation() {
        assert!(Hypergraph::new(3, vec![vec![0, 1]]).is_err());
        assert!(Hypergraph::new(2, vec![vec![0, 1], vec![]]).is_err());
        assert!(Hypergraph::new(2, vec![vec![0, 2]]).is_err());
        assert!(Hypergraph::new(2, vec![vec![0, 0, 1]]).is_err());
    }
}
