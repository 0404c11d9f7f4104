use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Hypergraph, VertexSet};

/// Tolerance on hyperedge sums of a probabilistic model.
pub const MODEL_SUM_TOL: f64 = 1e-9;

/// Probability assignment on the vertices of a scenario that sums to one
/// on every hyperedge.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbModel(Vec<f64>);

impl ProbModel {
    pub fn new(h: &Hypergraph, p: Vec<f64>) -> Result<Self> {
        if p.len() != h.n() {
            return Err(Error::Dimension(format!(
                "model has {} entries, scenario has {} vertices",
                p.len(),
                h.n()
            )));
        }
        if let Some((v, x)) = p
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_finite() || **x < -MODEL_SUM_TOL || **x > 1.0 + MODEL_SUM_TOL)
        {
            return Err(Error::InvalidInput(format!(
                "model entry {v} is {x}; probabilities must lie in [0, 1]"
            )));
        }
        let p: Vec<f64> = p.into_iter().map(|x| x.clamp(0.0, 1.0)).collect();
        for (i, e) in h.edges().iter().enumerate() {
            let sum: f64 = e.iter().map(|v| p[v]).sum();
            if (sum - 1.0).abs() > MODEL_SUM_TOL {
                return Err(Error::InvalidModel { edge: i, sum });
            }
        }
        Ok(Self(p))
    }

    /// The 0/1 model supported on `support`. Caller guarantees validity.
    pub(crate) fn indicator(support: &VertexSet) -> Self {
        Self((0..support.universe()).map(|v| if support.contains(v) { 1.0 } else { 0.0 }).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Class of models a distance is measured against. `Q` and `Q1` are
/// only reachable through their graph-invariant formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelClassTag {
    Classical,
    Ce1,
    Q,
    Q1,
}

impl std::str::FromStr for ModelClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Self::Classical),
            "ce1" => Ok(Self::Ce1),
            "q" => Ok(Self::Q),
            "q1" => Ok(Self::Q1),
            _ => Err(Error::InvalidInput(format!("unknown model class '{s}'"))),
        }
    }
}

/// Non-negative real or `+∞`. Serializes `+∞` as `{"infinite": true}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(x) => Some(x),
            Self::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Self::Infinite
    }

    pub fn log2(self) -> Self {
        self.map(f64::log2)
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Self::Finite(x) => Self::Finite(f(x)),
            Self::Infinite => Self::Infinite,
        }
    }

    /// `|self − x|`, infinite when `self` is.
    pub fn distance_to(self, x: f64) -> Self {
        self.map(|s| (s - x).abs())
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{x}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(x) => s.serialize_f64(*x),
            Self::Infinite => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("infinite", &true)?;
                m.end()
            }
        }
    }
}

/// Max-relative entropy `log2 max_v p(v)/q(v)` in bits.
pub fn dmax(p: &ProbModel, q: &ProbModel) -> Result<ExtReal> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!(
            "models live on {} and {} vertices",
            p.len(),
            q.len()
        )));
    }
    let mut ratio = 0.0f64;
    for (&a, &b) in p.as_slice().iter().zip(q.as_slice()) {
        if a > 0.0 {
            if b <= 0.0 {
                return Ok(ExtReal::Infinite);
            }
            ratio = ratio.max(a / b);
        }
    }
    // Both models sum to one on an edge, so the ratio is at least one.
    Ok(ExtReal::Finite(ratio.max(1.0).log2()))
}

/// Every 0/1 model, i.e. every vertex set meeting each hyperedge exactly
/// once, in lexicographic order of the indicator vectors (ones first).
///
/// Backtracks over hyperedges in increasing size order; aborts after
/// `limit` partial assignments.
pub fn deterministic_supports(h: &Hypergraph, limit: usize) -> Result<Vec<VertexSet>> {
    let mut order: Vec<usize> = (0..h.edges().len()).collect();
    order.sort_by_key(|&i| (h.edges()[i].len(), i));
    let mut search = Backtrack {
        h,
        order,
        state: vec![None; h.n()],
        visited: 0,
        limit,
        out: Vec::new(),
    };
    search.run(0)?;
    let mut out = search.out;
    out.sort_by_cached_key(|s| std::cmp::Reverse((0..h.n()).map(|v| s.contains(v)).collect::<Vec<_>>()));
    Ok(out)
}

pub fn deterministic_models(h: &Hypergraph, limit: usize) -> Result<Vec<ProbModel>> {
    Ok(deterministic_supports(h, limit)?.iter().map(ProbModel::indicator).collect())
}

struct Backtrack<'a> {
    h: &'a Hypergraph,
    order: Vec<usize>,
    state: Vec<Option<bool>>,
    visited: usize,
    limit: usize,
    out: Vec<VertexSet>,
}

impl Backtrack<'_> {
    fn run(&mut self, depth: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.limit {
            return Err(Error::EnumerationLimit(self.limit));
        }
        let Some(&ei) = self.order.get(depth) else {
            // Vertices untouched by any edge cannot exist (edges cover V).
            let n = self.h.n();
            let support = VertexSet::from_vertices(n, (0..n).filter(|&v| self.state[v] == Some(true)));
            self.out.push(support);
            return Ok(());
        };
        let edge = self.h.edges()[ei].to_vec();
        let ones = edge.iter().filter(|&&v| self.state[v] == Some(true)).count();
        let free: Vec<usize> = edge.iter().copied().filter(|&v| self.state[v].is_none()).collect();
        match ones {
            0 => {
                for &chosen in &free {
                    for &v in &free {
                        self.state[v] = Some(v == chosen);
                    }
                    self.run(depth + 1)?;
                }
                for &v in &free {
                    self.state[v] = None;
                }
            }
            1 => {
                for &v in &free {
                    self.state[v] = Some(false);
                }
                self.run(depth + 1)?;
                for &v in &free {
                    self.state[v] = None;
                }
            }
            _ => {}
        }
        Ok(())
    }
}
