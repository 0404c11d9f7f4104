use serde::Serialize;

use super::model::{deterministic_supports, ExtReal, ModelClassTag, ProbModel};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::{maximal_independent_sets, no_graph, Hypergraph, VertexSet};
use crate::invariants::{alpha, alpha_star, lovasz_theta, WeightVector};
use crate::opt::{lp_solve, LpProblem, LpStatus, Relation, Sense};

/// Primal and dual optima must agree to this absolute gap.
pub const STRONG_DUALITY_TOL: f64 = 1e-7;

/// Both sides of the classical max-relative-entropy LP pair.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalLp {
    /// `log2` of the common optimum, in bits.
    pub bits: ExtReal,
    /// `min Σ q` over mixtures dominating `p`.
    pub primal: ExtReal,
    /// `max ⟨p, w⟩` over `w ≥ 0` scoring at most one on every
    /// deterministic model.
    pub dual: ExtReal,
    /// Optimal dual weights (absent when the dual is unbounded).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<f64>>,
}

/// Generalized Bell inequality `⟨·, w⟩ ≤ L` together with its violation
/// ratio on the model it was extracted for.
#[derive(Debug, Clone, Serialize)]
pub struct BellWitness {
    pub w: Vec<f64>,
    #[serde(rename = "L")]
    pub l: f64,
    pub ratio: f64,
}

fn row(n: usize, set: &VertexSet) -> Vec<f64> {
    (0..n).map(|v| if set.contains(v) { 1.0 } else { 0.0 }).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn finite_or_inf(status: LpStatus, value: f64) -> ExtReal {
    match status {
        LpStatus::Optimal => ExtReal::Finite(value),
        _ => ExtReal::Infinite,
    }
}

/// Solves both classical LPs and checks strong duality.
pub fn classical_lp(h: &Hypergraph, p: &ProbModel, tol: &Tolerances) -> Result<ClassicalLp> {
    let supports = deterministic_supports(h, tol.enumeration_limit)?;
    classical_lp_with(h, p, &supports, tol)
}

fn classical_lp_with(
    h: &Hypergraph,
    p: &ProbModel,
    supports: &[VertexSet],
    tol: &Tolerances,
) -> Result<ClassicalLp> {
    let n = h.n();
    if supports.is_empty() {
        return Ok(ClassicalLp { bits: ExtReal::Infinite, primal: ExtReal::Infinite, dual: ExtReal::Infinite, w: None });
    }
    let m = supports.len();
    let mut primal = LpProblem::new(Sense::Min, vec![1.0; m]);
    for v in 0..n {
        let r = supports.iter().map(|s| if s.contains(v) { 1.0 } else { 0.0 }).collect();
        primal.push(r, Relation::Ge, p.as_slice()[v]);
    }
    let mut dual = LpProblem::new(Sense::Max, p.as_slice().to_vec());
    for s in supports {
        dual.push(row(n, s), Relation::Le, 1.0);
    }
    let ps = lp_solve(&primal, tol)?;
    let ds = lp_solve(&dual, tol)?;
    let (pv, dv) = (finite_or_inf(ps.status, ps.value), finite_or_inf(ds.status, ds.value));
    match (pv, dv) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) if (a - b).abs() > STRONG_DUALITY_TOL => {
            return Err(Error::Solver(format!("classical LP duality gap {:.3e}", (a - b).abs())));
        }
        (ExtReal::Finite(_), ExtReal::Infinite) | (ExtReal::Infinite, ExtReal::Finite(_)) => {
            return Err(Error::Solver(format!("classical LP pair disagrees: primal {pv}, dual {dv}")));
        }
        _ => {}
    }
    let w = ds.is_optimal().then(|| ds.primal.iter().map(|x| x.max(0.0)).collect());
    Ok(ClassicalLp { bits: pv.log2(), primal: pv, dual: dv, w })
}

/// Distance in bits from `p` to the classical models; `+∞` when no
/// mixture of deterministic models dominates `p`.
pub fn cmax_classical(h: &Hypergraph, p: &ProbModel, tol: &Tolerances) -> Result<ExtReal> {
    Ok(classical_lp(h, p, tol)?.bits)
}

/// Distance in bits from `p` to the models obeying consistent
/// exclusivity on the non-orthogonality graph.
///
/// With `r = t·q` the minimization over `q` becomes an LP in `(r, t)`:
/// minimize `t` subject to `r ≥ p`, `Σ_{v∈e} r(v) = t` on every hyperedge
/// and `Σ_{v∈I} r(v) ≤ t` on every maximal independent set `I`.
pub fn cmax_ce1(h: &Hypergraph, p: &ProbModel, tol: &Tolerances) -> Result<ExtReal> {
    let n = h.n();
    let mut obj = vec![0.0; n + 1];
    obj[n] = 1.0;
    let mut lp = LpProblem::new(Sense::Min, obj);
    let with_t = |set: &VertexSet| {
        let mut r = row(n, set);
        r.push(-1.0);
        r
    };
    for v in 0..n {
        let mut r = vec![0.0; n + 1];
        r[v] = 1.0;
        lp.push(r, Relation::Ge, p.as_slice()[v]);
    }
    for e in h.edges() {
        lp.push(with_t(e), Relation::Eq, 0.0);
    }
    for i in maximal_independent_sets(&no_graph(h)) {
        lp.push(with_t(&i), Relation::Le, 0.0);
    }
    let sol = lp_solve(&lp, tol)?;
    Ok(finite_or_inf(sol.status, sol.value).log2())
}

/// `log2` of the invariant of the non-orthogonality graph weighted by `p`
/// that the model class corresponds to.
pub fn cmax_graph_rhs(h: &Hypergraph, p: &ProbModel, which: ModelClassTag, tol: &Tolerances) -> Result<f64> {
    let g = no_graph(h);
    let w = WeightVector::new(p.as_slice().to_vec())?;
    let value = match which {
        ModelClassTag::Classical => alpha_star(&g, &w, tol)?,
        ModelClassTag::Q1 => lovasz_theta(&g, &w, tol)?,
        ModelClassTag::Ce1 => alpha(&g, &w)?,
        ModelClassTag::Q => {
            return Err(Error::InvalidInput(
                "the class q has no graph-invariant formula; use q1".into(),
            ))
        }
    };
    Ok(value.log2())
}

/// Classical bound `max ⟨p_cl, w⟩` over classical models, attained at a
/// deterministic one.
pub fn bell_bound(h: &Hypergraph, w: &[f64], tol: &Tolerances) -> Result<f64> {
    let supports = deterministic_supports(h, tol.enumeration_limit)?;
    bound_with(h, w, &supports)
}

fn bound_with(h: &Hypergraph, w: &[f64], supports: &[VertexSet]) -> Result<f64> {
    if w.len() != h.n() {
        return Err(Error::Dimension(format!("witness has {} entries, scenario has {}", w.len(), h.n())));
    }
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidInput("witness weights must be finite and non-negative".into()));
    }
    supports
        .iter()
        .map(|s| s.iter().map(|v| w[v]).sum::<f64>())
        .reduce(f64::max)
        .ok_or(Error::NoClassicalModels)
}

/// Extracts the optimal dual weights of the classical LP as a Bell
/// inequality.
///
/// When the dual is unbounded, `p` charges a vertex no deterministic
/// model uses; the witness is then a hyperedge indicator (classical
/// bound one) plus enough weight on those vertices to push the ratio one
/// unit past the fractional packing number.
pub fn bell_witness(h: &Hypergraph, p: &ProbModel, tol: &Tolerances) -> Result<BellWitness> {
    let supports = deterministic_supports(h, tol.enumeration_limit)?;
    if supports.is_empty() {
        return Err(Error::NoClassicalModels);
    }
    let n = h.n();
    let lp = classical_lp_with(h, p, &supports, tol)?;
    let w = match lp.w {
        Some(w) => w,
        None => {
            let used = supports.iter().fold(VertexSet::new(n), |acc, s| acc.union(s));
            let ray: Vec<f64> = (0..n).map(|v| if used.contains(v) { 0.0 } else { 1.0 }).collect();
            let mass = dot(p.as_slice(), &ray);
            if mass <= 0.0 {
                return Err(Error::Solver("unbounded classical LP without an escaping direction".into()));
            }
            let target = cmax_graph_rhs(h, p, ModelClassTag::Classical, tol)?.exp2() + 1.0;
            let s = ((target - 1.0) / mass).max(0.0);
            let mut w = row(n, &h.edges()[0]);
            for (wi, ri) in w.iter_mut().zip(&ray) {
                *wi += s * ri;
            }
            w
        }
    };
    let l = bound_with(h, &w, &supports)?;
    if l <= 0.0 {
        return Err(Error::Solver("witness has zero classical bound".into()));
    }
    let ratio = dot(p.as_slice(), &w) / l;
    Ok(BellWitness { w, l, ratio })
}

/// Full comparison of the LP distances with the graph-invariant formulas.
#[derive(Debug, Clone, Serialize)]
pub struct ContextualityReport {
    pub cmax_classical: ExtReal,
    pub cmax_ce1: ExtReal,
    pub lp: ClassicalLp,
    pub rhs: GraphRhs,
    /// `|LP distance − graph formula|` in bits.
    pub residuals: Residuals,
    /// Absent when the scenario has no classical model.
    pub witness: Option<BellWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphRhs {
    pub classical: f64,
    pub q1: f64,
    pub ce1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Residuals {
    pub classical: ExtReal,
    pub ce1: ExtReal,
}

pub fn contextuality_report(h: &Hypergraph, p: &ProbModel, tol: &Tolerances) -> Result<ContextualityReport> {
    let lp = classical_lp(h, p, tol)?;
    let cmax_ce1 = cmax_ce1(h, p, tol)?;
    let rhs = GraphRhs {
        classical: cmax_graph_rhs(h, p, ModelClassTag::Classical, tol)?,
        q1: cmax_graph_rhs(h, p, ModelClassTag::Q1, tol)?,
        ce1: cmax_graph_rhs(h, p, ModelClassTag::Ce1, tol)?,
    };
    let witness = match bell_witness(h, p, tol) {
        Ok(w) => Some(w),
        Err(Error::NoClassicalModels) => None,
        Err(e) => return Err(e),
    };
    Ok(ContextualityReport {
        cmax_classical: lp.bits,
        cmax_ce1,
        residuals: Residuals {
            classical: lp.bits.distance_to(rhs.classical),
            ce1: cmax_ce1.distance_to(rhs.ce1),
        },
        lp,
        rhs,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn h(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    fn m(h: &Hypergraph, p: &[f64]) -> ProbModel {
        ProbModel::new(h, p.to_vec()).unwrap()
    }

    fn bits(x: ExtReal) -> f64 {
        x.finite().expect("finite")
    }

    /// Five binary contexts around a cycle, each padded with a private
    /// outcome so that deterministic models exist.
    fn padded_pentagon() -> Hypergraph {
        let edges = (0..5).map(|i| vec![i, (i + 1) % 5, 5 + i]).collect();
        Hypergraph::new(10, edges).unwrap()
    }

    #[test]
    fn classical_examples() {
        let e = h(2, &[&[0, 1]]);
        assert!(bits(cmax_classical(&e, &m(&e, &[0.3, 0.7]), &tol()).unwrap()).abs() < 1e-9);
        let t = h(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(cmax_classical(&t, &m(&t, &[0.5; 3]), &tol()).unwrap().is_infinite());
        let d = h(4, &[&[0, 1], &[2, 3]]);
        assert!(bits(cmax_classical(&d, &m(&d, &[0.5; 4]), &tol()).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn ce1_examples() {
        let e = h(2, &[&[0, 1]]);
        assert!(bits(cmax_ce1(&e, &m(&e, &[0.3, 0.7]), &tol()).unwrap()).abs() < 1e-9);
        let d = h(5, &[&[0, 1, 2], &[2, 3], &[3, 4, 0]]);
        for s in deterministic_supports(&d, 1000).unwrap() {
            assert!(bits(cmax_ce1(&d, &ProbModel::indicator(&s), &tol()).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn ce1_is_infinite_on_triangle() {
        // Edge sums force r = t/2 everywhere, while the single maximal
        // independent set {0,1,2} caps the total at t.
        let t = h(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let p = m(&t, &[0.5; 3]);
        assert!(cmax_ce1(&t, &p, &tol()).unwrap().is_infinite());
        assert!((cmax_graph_rhs(&t, &p, ModelClassTag::Ce1, &tol()).unwrap() - 1.5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn graph_rhs_examples() {
        let t = h(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let p = m(&t, &[0.5; 3]);
        for which in [ModelClassTag::Ce1, ModelClassTag::Q1, ModelClassTag::Classical] {
            assert!((cmax_graph_rhs(&t, &p, which, &tol()).unwrap() - 1.5f64.log2()).abs() < 1e-6);
        }
        let e = h(2, &[&[0, 1]]);
        let v = cmax_graph_rhs(&e, &m(&e, &[0.3, 0.7]), ModelClassTag::Classical, &tol()).unwrap();
        assert!(v.abs() < 1e-12);
        assert!(cmax_graph_rhs(&e, &m(&e, &[0.3, 0.7]), ModelClassTag::Q, &tol()).is_err());
    }

    #[test]
    fn bell_bound_examples() {
        let e = h(2, &[&[0, 1]]);
        assert_eq!(bell_bound(&e, &[1.0, 2.0], &tol()).unwrap(), 2.0);
        assert_eq!(bell_bound(&e, &[0.0, 0.0], &tol()).unwrap(), 0.0);
        let d = h(4, &[&[0, 1], &[2, 3]]);
        assert_eq!(bell_bound(&d, &[1.0, 2.0, 3.0, 4.0], &tol()).unwrap(), 6.0);
        let t = h(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert!(matches!(bell_bound(&t, &[1.0; 3], &tol()), Err(Error::NoClassicalModels)));
    }

    #[test]
    fn classical_model_has_no_violation() {
        let e = h(2, &[&[0, 1]]);
        let wit = bell_witness(&e, &m(&e, &[0.3, 0.7]), &tol()).unwrap();
        assert!(wit.ratio >= 1.0 - 1e-9);
        assert!(wit.ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn pentagon_witness() {
        let h = padded_pentagon();
        let mut p = vec![0.5; 5];
        p.extend([0.0; 5]);
        let p = m(&h, &p);
        // Brute-force check of the non-orthogonality graph on the cycle
        // outcomes: i ~ j exactly when they are not neighbours on the cycle.
        let g = no_graph(&h);
        for i in 0..5 {
            for j in 0..5 {
                let cyclic = (i + 1) % 5 == j || (j + 1) % 5 == i;
                assert_eq!(g.is_adjacent(i, j), i != j && !cyclic);
            }
        }
        let wit = bell_witness(&h, &p, &tol()).unwrap();
        assert!((wit.ratio - 1.25).abs() < 1e-9, "{wit:?}");
        let supports = deterministic_supports(&h, 1000).unwrap();
        for s in &supports {
            assert!(s.iter().map(|v| wit.w[v]).sum::<f64>() <= 1.0 + 1e-9);
        }
        let rhs = cmax_graph_rhs(&h, &p, ModelClassTag::Classical, &tol()).unwrap();
        assert!((rhs - 1.25f64.log2()).abs() < 1e-9);
        assert!((bits(cmax_classical(&h, &p, &tol()).unwrap()) - rhs).abs() < 1e-9);
    }

    #[test]
    fn unpadded_pentagon_has_no_classical_model() {
        let h = h(5, &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 0]]);
        assert!(matches!(bell_witness(&h, &m(&h, &[0.5; 5]), &tol()), Err(Error::NoClassicalModels)));
    }

    #[test]
    fn unbounded_dual_still_yields_witness() {
        // The only deterministic support is {1, 3}; p charges vertices 0 and 2.
        let h = h(4, &[&[0, 1], &[1, 2], &[0, 2, 3]]);
        let supports = deterministic_supports(&h, 1000).unwrap();
        assert_eq!(supports.iter().map(VertexSet::to_vec).collect::<Vec<_>>(), vec![vec![1, 3]]);
        let p = m(&h, &[0.4, 0.6, 0.4, 0.2]);
        let lp = classical_lp(&h, &p, &tol()).unwrap();
        assert!(lp.bits.is_infinite());
        let wit = bell_witness(&h, &p, &tol()).unwrap();
        let target = cmax_graph_rhs(&h, &p, ModelClassTag::Classical, &tol()).unwrap().exp2();
        assert!(wit.ratio >= target - 1e-9, "{wit:?}");
    }

    #[test]
    fn report_serializes() {
        let t = h(3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let r = contextuality_report(&t, &m(&t, &[0.5; 3]), &tol()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["cmax_classical"], serde_json::json!({"infinite": true}));
        assert!(json["witness"].is_null());
    }
}
