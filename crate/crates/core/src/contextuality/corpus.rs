use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::model::ProbModel;
use crate::config::Tolerances;
use crate::error::Result;
use crate::graph::Hypergraph;
use crate::opt::{lp_solve, LpProblem, Relation, Sense};

/// A scenario together with one model on it.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub scenario: Hypergraph,
    pub model: ProbModel,
}

fn entry(name: &str, n: usize, edges: Vec<Vec<usize>>, p: Vec<f64>) -> CorpusEntry {
    let scenario = Hypergraph::new(n, edges).expect("fixed scenario is valid");
    let model = ProbModel::new(&scenario, p).expect("fixed model is valid");
    CorpusEntry { name: name.into(), scenario, model }
}

/// Hand-picked scenarios followed by `random` generated ones
/// (at most 8 vertices, at most 6 hyperedges).
pub fn corpus(seed: u64, random: usize, tol: &Tolerances) -> Result<Vec<CorpusEntry>> {
    let mut out = vec![
        entry("single-edge", 2, vec![vec![0, 1]], vec![0.3, 0.7]),
        entry("disjoint-edges", 4, vec![vec![0, 1], vec![2, 3]], vec![0.5; 4]),
        entry("triangle", 3, vec![vec![0, 1], vec![1, 2], vec![0, 2]], vec![0.5; 3]),
        entry(
            "padded-pentagon",
            10,
            (0..5).map(|i| vec![i, (i + 1) % 5, 5 + i]).collect(),
            [[0.5; 5], [0.0; 5]].concat(),
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut index = 0;
    while index < random {
        let scenario = random_scenario(&mut rng);
        if let Some(model) = random_model(&scenario, &mut rng, tol)? {
            out.push(CorpusEntry { name: format!("random-{index}"), scenario, model });
            index += 1;
        }
    }
    Ok(out)
}

pub fn random_scenario(rng: &mut ChaCha8Rng) -> Hypergraph {
    let n = rng.gen_range(2..=8);
    let m = rng.gen_range(1..=6);
    let vertices: Vec<usize> = (0..n).collect();
    let mut edges: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let k = rng.gen_range(2..=n.min(4));
            let mut e: Vec<usize> = vertices.choose_multiple(rng, k).copied().collect();
            e.sort_unstable();
            e
        })
        .collect();
    for v in 0..n {
        if !edges.iter().any(|e| e.contains(&v)) {
            let e = edges.choose_mut(rng).expect("at least one edge");
            e.push(v);
            e.sort_unstable();
        }
    }
    edges.sort();
    edges.dedup();
    Hypergraph::new(n, edges).expect("generated scenario is valid")
}

/// Average of a few vertices of the model polytope reached by random
/// objectives; `None` when the scenario admits no model.
pub fn random_model(h: &Hypergraph, rng: &mut ChaCha8Rng, tol: &Tolerances) -> Result<Option<ProbModel>> {
    const VERTICES: usize = 3;
    let n = h.n();
    let mut sum = vec![0.0; n];
    for _ in 0..VERTICES {
        let mut lp = LpProblem::new(Sense::Max, (0..n).map(|_| rng.gen::<f64>()).collect());
        for e in h.edges() {
            lp.push((0..n).map(|v| if e.contains(v) { 1.0 } else { 0.0 }).collect(), Relation::Eq, 1.0);
        }
        let sol = lp_solve(&lp, tol)?;
        if !sol.is_optimal() {
            return Ok(None);
        }
        for (s, x) in sum.iter_mut().zip(&sol.primal) {
            *s += x.max(0.0) / VERTICES as f64;
        }
    }
    Ok(ProbModel::new(h, sum).ok())
}
