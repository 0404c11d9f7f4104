//! Maximum-weight independent set by branch and bound.
//!
//! Branching is include-first on the lowest remaining vertex, and a node
//! is pruned when it cannot beat the incumbent strictly, so the reported
//! set is the first optimum in that order. The bound at each node is a
//! greedy clique cover of the remaining candidates charged at the
//! heaviest vertex of each clique.

use serde::Serialize;

use super::WeightVector;
use crate::error::Result;
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, Serialize)]
pub struct IndependentSetCertificate {
    pub value: f64,
    pub set: Vec<usize>,
}

pub fn alpha(g: &Graph, p: &WeightVector) -> Result<f64> {
    Ok(alpha_certificate(g, p)?.value)
}

pub fn alpha_certificate(g: &Graph, p: &WeightVector) -> Result<IndependentSetCertificate> {
    p.check_len(g.n())?;
    let mut search = Search {
        g,
        w: p.as_slice(),
        best: f64::NEG_INFINITY,
        best_set: VertexSet::new(g.n()),
    };
    let mut cur = VertexSet::new(g.n());
    search.expand(VertexSet::full(g.n()), &mut cur, 0.0);
    Ok(IndependentSetCertificate {
        value: search.best,
        set: search.best_set.to_vec(),
    })
}

struct Search<'a> {
    g: &'a Graph,
    w: &'a [f64],
    best: f64,
    best_set: VertexSet,
}

impl Search<'_> {
    fn expand(&mut self, cand: VertexSet, cur: &mut VertexSet, cur_w: f64) {
        let Some(v) = cand.first() else {
            if cur_w > self.best {
                self.best = cur_w;
                self.best_set = cur.clone();
            }
            return;
        };
        if cur_w + self.clique_cover_bound(&cand) <= self.best {
            return;
        }
        let nv = self.g.neighbors(v);
        let mut with_v = cand.difference(nv);
        with_v.remove(v);
        cur.insert(v);
        self.expand(with_v, cur, cur_w + self.w[v]);
        cur.remove(v);
        let mut without_v = cand;
        without_v.remove(v);
        self.expand(without_v, cur, cur_w);
    }

    fn clique_cover_bound(&self, cand: &VertexSet) -> f64 {
        let mut rest = cand.clone();
        let mut bound = 0.0;
        while let Some(v) = rest.first() {
            let mut clique_max = self.w[v];
            rest.remove(v);
            let mut grow = rest.intersection(self.g.neighbors(v));
            while let Some(u) = grow.first() {
                clique_max = clique_max.max(self.w[u]);
                rest.remove(u);
                grow.remove(u);
                grow.intersect_with(self.g.neighbors(u));
            }
            bound += clique_max;
        }
        bound
    }
}
