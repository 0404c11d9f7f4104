use serde::Serialize;

use super::WeightVector;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::{maximal_cliques, Graph, VertexSet};
use crate::opt::{lp_solve, LpProblem, Relation, Sense};

#[derive(Debug, Clone, Serialize)]
pub struct FractionalPackingCertificate {
    pub value: f64,
    /// Optimal vertex weighting `q`.
    pub q: Vec<f64>,
}

/// Weighted fractional packing number: `max ⟨p, q⟩` over `q ≥ 0` with
/// `Σ_{v∈C} q(v) ≤ 1` for every maximal clique `C`.
pub fn alpha_star(g: &Graph, p: &WeightVector, tol: &Tolerances) -> Result<f64> {
    Ok(alpha_star_certificate(g, p, tol)?.value)
}

pub fn alpha_star_certificate(
    g: &Graph,
    p: &WeightVector,
    tol: &Tolerances,
) -> Result<FractionalPackingCertificate> {
    p.check_len(g.n())?;
    alpha_star_with_cliques(&maximal_cliques(g), p, tol)
}

/// Same LP with a precomputed clique list (handles evaluate it repeatedly).
pub(crate) fn alpha_star_with_cliques(
    cliques: &[VertexSet],
    p: &WeightVector,
    tol: &Tolerances,
) -> Result<FractionalPackingCertificate> {
    let n = p.len();
    let mut lp = LpProblem::new(Sense::Max, p.as_slice().to_vec());
    for c in cliques {
        let row = (0..n).map(|v| if c.contains(v) { 1.0 } else { 0.0 }).collect();
        lp.push(row, Relation::Le, 1.0);
    }
    let sol = lp_solve(&lp, tol)?;
    if !sol.is_optimal() {
        return Err(Error::Solver(format!(
            "fractional packing LP returned {:?}",
            sol.status
        )));
    }
    Ok(FractionalPackingCertificate {
        value: sol.value,
        q: sol.primal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn c5_is_five_halves() {
        let c = alpha_star_certificate(&Graph::cycle(5).unwrap(), &WeightVector::ones(5), &tol()).unwrap();
        assert!((c.value - 2.5).abs() < 1e-12);
        assert!(c.q.iter().all(|q| (q - 0.5).abs() < 1e-12));
    }

    #[test]
    fn complete_graph_is_one() {
        for n in 1..=6 {
            let v = alpha_star(&Graph::complete(n).unwrap(), &WeightVector::ones(n), &tol()).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_graph_is_weight_sum() {
        let v = alpha_star(&Graph::empty(4).unwrap(), &WeightVector::ones(4), &tol()).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }
}
