use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::handle::FunctionHandle;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::{maximal_cliques, Graph};
use crate::invariants::{alpha, alpha_star_with_cliques, lovasz_theta, WeightVector};

/// The built-in families of [`FunctionHandle`]s.
#[derive(Debug, Clone)]
pub enum HandleKind {
    /// `‖p‖_r = (Σ p_i^r)^{1/r}` for `r > 0`, including `r = ∞`. Convex iff `r ≥ 1`.
    NormP { n: usize, r: f64 },
    /// `⟨a, p⟩` with `a > 0`.
    Linear { a: Vec<f64> },
    /// `max_i a_i p_i` with `a > 0`.
    MaxLinear { a: Vec<f64> },
    GraphAlpha(Graph),
    GraphAlphaStar(Graph),
    GraphTheta(Graph),
    /// `α_{G^⊠k}(p^{⊗k})^{1/k}`.
    CapacityLevel { graph: Graph, k: usize },
    /// Pointwise maximum of capacity levels `1..=kmax`.
    CapacityLower { graph: Graph, kmax: usize },
    Custom(TabulatedFunction),
}

/// Builds a handle and runs the audit; a handle that fails is rejected
/// with the violated axiom.
pub fn make_handle(kind: HandleKind, tol: &Tolerances) -> Result<FunctionHandle> {
    let h = build(kind, tol)?;
    h.audit(tol)?;
    Ok(h)
}

fn positive_vector(a: &[f64], what: &str) -> Result<()> {
    if a.is_empty() || a.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::InvalidInput(format!("{what} coefficients must be positive and finite")));
    }
    Ok(())
}

/// Bounds shared by every weighted graph invariant: `max p ≤ f(p) ≤ Σp`.
fn graph_bounds(h: FunctionHandle) -> FunctionHandle {
    let n = h.dim() as f64;
    h.with_bounds(1.0 / n.sqrt(), n.sqrt())
}

fn build(kind: HandleKind, tol: &Tolerances) -> Result<FunctionHandle> {
    Ok(match kind {
        HandleKind::NormP { n, r } => {
            if n == 0 || !(r > 0.0) || r.is_nan() {
                return Err(Error::InvalidInput(format!("norm-p needs n ≥ 1 and r > 0, got n = {n}, r = {r}")));
            }
            let name = if r.is_infinite() { "norm-inf".to_string() } else { format!("norm-{r}") };
            let e = if r.is_infinite() { -0.5 } else { 1.0 / r - 0.5 };
            let k = (n as f64).powf(e);
            let h = if r.is_infinite() {
                FunctionHandle::new(name, n, true, true, |p: &[f64]| Ok(p.iter().copied().fold(0.0, f64::max)))
            } else if r == 2.0 {
                FunctionHandle::new(name, n, true, true, |p: &[f64]| Ok(p.iter().map(|x| x * x).sum::<f64>().sqrt()))
            } else if r == 1.0 {
                FunctionHandle::new(name, n, true, true, |p: &[f64]| Ok(p.iter().sum()))
            } else {
                // Scale by the largest entry first so neither tiny nor huge
                // points lose homogeneity to under/overflow.
                FunctionHandle::new(name, n, r >= 1.0, true, move |p: &[f64]| {
                    let m = p.iter().copied().fold(0.0, f64::max);
                    if m == 0.0 {
                        return Ok(0.0);
                    }
                    Ok(m * p.iter().map(|x| (x / m).powf(r)).sum::<f64>().powf(1.0 / r))
                })
            };
            h.with_bounds(k.min(1.0), k.max(1.0))
        }
        HandleKind::Linear { a } => {
            positive_vector(&a, "linear")?;
            let lo = a.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let name = format!("linear{a:?}");
            FunctionHandle::new(name, a.len(), true, true, move |p: &[f64]| {
                Ok(a.iter().zip(p).map(|(x, y)| x * y).sum())
            })
            .with_bounds(lo, hi)
        }
        HandleKind::MaxLinear { a } => {
            positive_vector(&a, "max-linear")?;
            let n = a.len() as f64;
            let lo = a.iter().copied().fold(f64::INFINITY, f64::min) / n.sqrt();
            let hi = a.iter().copied().fold(0.0, f64::max);
            let name = format!("max-linear{a:?}");
            FunctionHandle::new(name, a.len(), true, true, move |p: &[f64]| {
                Ok(a.iter().zip(p).map(|(x, y)| x * y).fold(0.0, f64::max))
            })
            .with_bounds(lo, hi)
        }
        HandleKind::GraphAlpha(g) => {
            let n = g.n();
            graph_bounds(FunctionHandle::homogeneous("graph-alpha", n, true, true, move |q: &[f64]| {
                alpha(&g, &WeightVector::new(q.to_vec())?)
            }))
        }
        HandleKind::GraphAlphaStar(g) => {
            let n = g.n();
            let cliques = maximal_cliques(&g);
            let tol = tol.clone();
            graph_bounds(FunctionHandle::homogeneous("graph-alpha-star", n, true, true, move |q: &[f64]| {
                Ok(alpha_star_with_cliques(&cliques, &WeightVector::new(q.to_vec())?, &tol)?.value)
            }))
        }
        HandleKind::GraphTheta(g) => {
            let n = g.n();
            let tol = tol.clone();
            graph_bounds(FunctionHandle::homogeneous("graph-theta", n, true, true, move |q: &[f64]| {
                lovasz_theta(&g, &WeightVector::new(q.to_vec())?, &tol)
            }))
        }
        HandleKind::CapacityLevel { graph, k } => {
            let n = graph.n();
            let level = CapacityLevel::new(&graph, k, tol.vertex_budget)?;
            graph_bounds(FunctionHandle::homogeneous(
                format!("capacity-level-{k}"),
                n,
                k == 1,
                true,
                move |q: &[f64]| level.eval(q),
            ))
        }
        HandleKind::CapacityLower { graph, kmax } => {
            if kmax == 0 {
                return Err(Error::InvalidInput("kmax must be >= 1".into()));
            }
            let n = graph.n();
            let levels = (1..=kmax)
                .map(|k| CapacityLevel::new(&graph, k, tol.vertex_budget))
                .collect::<Result<Vec<_>>>()?;
            graph_bounds(FunctionHandle::homogeneous(
                format!("capacity-lower-{kmax}"),
                n,
                kmax == 1,
                true,
                move |q: &[f64]| levels.iter().try_fold(0.0, |m: f64, l| Ok(m.max(l.eval(q)?))),
            ))
        }
        HandleKind::Custom(t) => {
            let n = t.n;
            let (convex, monotone) = (t.convex, t.monotone);
            let t = Arc::new(t);
            FunctionHandle::homogeneous("custom", n, convex, monotone, move |q: &[f64]| Ok(t.interpolate(q)))
        }
    })
}

struct CapacityLevel {
    power: Graph,
    k: usize,
}

impl CapacityLevel {
    fn new(g: &Graph, k: usize, budget: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("capacity level must be >= 1".into()));
        }
        Ok(Self {
            power: g.strong_power(k, budget)?,
            k,
        })
    }

    fn eval(&self, q: &[f64]) -> Result<f64> {
        let w = WeightVector::new(q.to_vec())?.tensor_power(self.k);
        Ok(alpha(&self.power, &w)?.powf(1.0 / self.k as f64))
    }
}

/// JSON form of a tabulated handle: values at grid points of `ℝⁿ₊`,
/// extended homogeneously from their projections onto the simplex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TabulatedSpec {
    pub n: usize,
    pub grid: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    #[serde(default)]
    pub convex: bool,
    #[serde(default)]
    pub monotone: bool,
}

/// Piecewise-linear function on the simplex, from a table.
///
/// For `n = 2` the grid may be any set of points whose projections include
/// both vertices. For `n ≥ 3` the projections must form the full lattice
/// `{q : m·q ∈ ℤⁿ}` for some resolution `m`; values in between come from
/// the Kuhn triangulation of that lattice.
#[derive(Debug, Clone)]
pub struct TabulatedFunction {
    n: usize,
    convex: bool,
    monotone: bool,
    table: Table,
}

#[derive(Debug, Clone)]
enum Table {
    Single(f64),
    Line(Vec<(f64, f64)>),
    Lattice { m: usize, values: HashMap<Vec<usize>, f64> },
}

const GRID_EPS: f64 = 1e-9;

impl TabulatedFunction {
    pub fn from_spec(spec: TabulatedSpec, tol: &Tolerances) -> Result<Self> {
        let n = spec.n;
        if n == 0 {
            return Err(Error::InvalidInput("tabulated function needs n >= 1".into()));
        }
        if spec.grid.len() != spec.values.len() || spec.grid.is_empty() {
            return Err(Error::InvalidInput(format!(
                "grid has {} points but {} values",
                spec.grid.len(),
                spec.values.len()
            )));
        }
        // Project onto the simplex, rescaling values homogeneously.
        let mut points: Vec<(Vec<f64>, f64)> = Vec::new();
        for (x, &v) in spec.grid.iter().zip(&spec.values) {
            if x.len() != n {
                return Err(Error::Dimension(format!("grid point {x:?} does not have length {n}")));
            }
            if x.iter().any(|c| !(c.is_finite() && *c >= 0.0)) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("grid point {x:?} or value {v} is not a finite nonnegative number")));
            }
            let s: f64 = x.iter().sum();
            if s == 0.0 {
                if v != 0.0 {
                    return Err(Error::Audit {
                        axiom: "positive affine",
                        detail: format!("value {v} at the origin"),
                    });
                }
                continue;
            }
            if v <= 0.0 {
                return Err(Error::Audit {
                    axiom: "nondegenerate",
                    detail: format!("value {v} at {x:?}"),
                });
            }
            let q: Vec<f64> = x.iter().map(|c| c / s).collect();
            let w = v / s;
            if let Some((_, prev)) = points
                .iter()
                .find(|(p, _)| p.iter().zip(&q).all(|(a, b)| (a - b).abs() <= GRID_EPS))
            {
                if (prev - w).abs() > tol.homogeneity * prev.max(w) {
                    return Err(Error::Audit {
                        axiom: "positive affine",
                        detail: format!("grid points along the ray of {x:?} have non-proportional values"),
                    });
                }
                continue;
            }
            points.push((q, w));
        }
        if points.is_empty() {
            return Err(Error::InvalidInput("grid has no nonzero point".into()));
        }
        let table = match n {
            1 => Table::Single(points[0].1),
            2 => {
                let mut line: Vec<(f64, f64)> = points.iter().map(|(q, w)| (q[0], *w)).collect();
                line.sort_by(|a, b| a.0.total_cmp(&b.0));
                if line[0].0 > GRID_EPS || line[line.len() - 1].0 < 1.0 - GRID_EPS {
                    return Err(Error::InvalidInput("grid must contain both simplex vertices".into()));
                }
                Table::Line(line)
            }
            _ => lattice(n, &points)?,
        };
        Ok(Self {
            n,
            convex: spec.convex,
            monotone: spec.monotone,
            table,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Value at a point of the simplex.
    pub fn interpolate(&self, q: &[f64]) -> f64 {
        match &self.table {
            Table::Single(v) => *v,
            Table::Line(line) => {
                let t = q[0];
                let i = line.partition_point(|(x, _)| *x < t).clamp(1, line.len() - 1);
                let (x0, v0) = line[i - 1];
                let (x1, v1) = line[i];
                if x1 - x0 <= 0.0 {
                    return v0;
                }
                let s = ((t - x0) / (x1 - x0)).clamp(0.0, 1.0);
                v0 + s * (v1 - v0)
            }
            Table::Lattice { m, values } => kuhn_interpolate(q, *m, values),
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn lattice(n: usize, points: &[(Vec<f64>, f64)]) -> Result<Table> {
    let m = (1..=1000usize)
        .find(|&m| {
            points
                .iter()
                .all(|(q, _)| q.iter().all(|c| (c * m as f64 - (c * m as f64).round()).abs() <= 1e-7))
        })
        .ok_or_else(|| Error::InvalidInput("grid points are not on a regular simplex lattice".into()))?;
    let values: HashMap<Vec<usize>, f64> = points
        .iter()
        .map(|(q, w)| (q.iter().map(|c| (c * m as f64).round() as usize).collect(), *w))
        .collect();
    let expected = binomial(m + n - 1, n - 1);
    if values.len() as u128 != expected {
        return Err(Error::InvalidInput(format!(
            "lattice of resolution {m} needs {expected} points, grid covers {}",
            values.len()
        )));
    }
    Ok(Table::Lattice { m, values })
}

/// Piecewise-linear interpolation on the Kuhn triangulation, in cumulative
/// coordinates `c_k = m·(q_0 + … + q_{k−1})`, which are ordered and so lie
/// in the region triangulated by Kuhn simplices of the unit-cube grid.
fn kuhn_interpolate(q: &[f64], m: usize, values: &HashMap<Vec<usize>, f64>) -> f64 {
    let n = q.len();
    let d = n - 1;
    let mf = m as f64;
    let mut c = vec![0.0; d];
    let mut acc = 0.0;
    for k in 0..d {
        acc += q[k] * mf;
        let prev = if k > 0 { c[k - 1] } else { 0.0 };
        c[k] = acc.clamp(prev, mf);
    }
    let mut base = vec![0usize; d];
    let mut frac = vec![0.0; d];
    for k in 0..d {
        let r = c[k].round();
        let x = if (c[k] - r).abs() < 1e-12 { r } else { c[k] };
        let fl = x.floor().min(mf);
        base[k] = fl as usize;
        frac[k] = x - fl;
    }
    // Largest fraction first; on ties the later coordinate goes first so
    // that the cumulative order is preserved at every vertex.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| frac[b].total_cmp(&frac[a]).then(b.cmp(&a)));
    let lookup = |cum: &[usize]| -> f64 {
        let mut x = Vec::with_capacity(n);
        let mut prev = 0;
        for &ck in cum {
            x.push(ck - prev);
            prev = ck;
        }
        x.push(m - prev);
        values[&x]
    };
    let mut vertex = base.clone();
    let mut total = 0.0;
    let first = if d > 0 { frac[order[0]] } else { 0.0 };
    if 1.0 - first > 0.0 {
        total += (1.0 - first) * lookup(&vertex);
    }
    for j in 0..d {
        let fj = frac[order[j]];
        if fj <= 0.0 {
            break;
        }
        vertex[order[j]] += 1;
        let next = if j + 1 < d { frac[order[j + 1]] } else { 0.0 };
        let w = fj - next;
        if w > 0.0 {
            total += w * lookup(&vertex);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn norms_and_linear_forms() {
        let e = make_handle(HandleKind::NormP { n: 2, r: 2.0 }, &tol()).unwrap();
        assert_eq!(e.eval(&[3.0, 4.0]).unwrap(), 5.0);
        let half = make_handle(HandleKind::NormP { n: 2, r: 0.5 }, &tol()).unwrap();
        assert!((half.eval(&[1.0, 1.0]).unwrap() - 4.0).abs() < 1e-12);
        assert!(!half.is_convex());
        let inf = make_handle(HandleKind::NormP { n: 3, r: f64::INFINITY }, &tol()).unwrap();
        assert_eq!(inf.eval(&[1.0, 5.0, 2.0]).unwrap(), 5.0);
        let lin = make_handle(HandleKind::Linear { a: vec![1.0, 1.0, 1.0] }, &tol()).unwrap();
        assert_eq!(lin.eval(&[1.0, 2.0, 3.0]).unwrap(), 6.0);
        let ml = make_handle(HandleKind::MaxLinear { a: vec![1.0, 2.0] }, &tol()).unwrap();
        assert_eq!(ml.eval(&[3.0, 1.0]).unwrap(), 3.0);
        assert!(make_handle(HandleKind::Linear { a: vec![1.0, 0.0] }, &tol()).is_err());
    }

    #[test]
    fn graph_handles() {
        let c5 = Graph::cycle(5).unwrap();
        let a = make_handle(HandleKind::GraphAlpha(c5.clone()), &tol()).unwrap();
        assert!(a.is_convex() && a.is_monotone());
        assert_eq!(a.eval(&[1.0; 5]).unwrap(), 2.0);
        let s = make_handle(HandleKind::GraphAlphaStar(c5.clone()), &tol()).unwrap();
        assert!((s.eval(&[1.0; 5]).unwrap() - 2.5).abs() < 1e-12);
        let t = make_handle(HandleKind::GraphTheta(c5.clone()), &tol()).unwrap();
        assert!((t.eval(&[1.0; 5]).unwrap() - 5f64.sqrt()).abs() < 1e-8);
        let l1 = make_handle(HandleKind::CapacityLevel { graph: c5.clone(), k: 1 }, &tol()).unwrap();
        assert!(l1.is_convex());
        for p in [[1.0, 2.0, 0.5, 0.0, 3.0], [0.1, 0.2, 0.3, 0.4, 0.5]] {
            assert!((l1.eval(&p).unwrap() - a.eval(&p).unwrap()).abs() < 1e-12);
        }
        let lower = make_handle(HandleKind::CapacityLower { graph: c5, kmax: 2 }, &tol()).unwrap();
        assert!((lower.eval(&[1.0; 5]).unwrap() - 5f64.sqrt()).abs() < 1e-12);
    }

    fn spec(n: usize, grid: Vec<Vec<f64>>, values: Vec<f64>) -> TabulatedSpec {
        TabulatedSpec {
            n,
            grid,
            values,
            convex: false,
            monotone: false,
        }
    }

    #[test]
    fn tabulated_line_interpolates() {
        let t = TabulatedFunction::from_spec(
            spec(2, vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 2.0]], vec![1.0, 3.0, 4.0]),
            &tol(),
        )
        .unwrap();
        let h = make_handle(HandleKind::Custom(t), &tol()).unwrap();
        assert!((h.eval(&[1.0, 1.0]).unwrap() - 3.0).abs() < 1e-12);
        assert!((h.eval(&[0.0, 3.0]).unwrap() - 6.0).abs() < 1e-12);
        // Halfway between (1,0) and (½,½) on the simplex: value ½(1 + 1.5).
        assert!((h.eval(&[0.75, 0.25]).unwrap() - 1.25).abs() < 1e-12);
    }

    #[test]
    fn tabulated_rejects_non_homogeneous_tables() {
        let err = TabulatedFunction::from_spec(
            spec(2, vec![vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]], vec![1.0, 3.0, 1.0]),
            &tol(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Audit { axiom: "positive affine", .. }));
        let err = TabulatedFunction::from_spec(spec(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, 0.0]), &tol())
            .unwrap_err();
        assert!(matches!(err, Error::Audit { axiom: "nondegenerate", .. }));
        assert!(TabulatedFunction::from_spec(spec(2, vec![vec![1.0, 0.0], vec![1.0, 1.0]], vec![1.0, 1.0]), &tol()).is_err());
    }

    #[test]
    fn tabulated_lattice_reproduces_linear_functions() {
        // Linear data is reproduced exactly by any triangulation.
        let n = 4;
        let m = 3;
        let a = [1.0, 2.0, 0.5, 3.0];
        let mut grid = Vec::new();
        let mut values = Vec::new();
        fn rec(n: usize, left: usize, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
            if cur.len() == n - 1 {
                cur.push(left as f64);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for i in 0..=left {
                cur.push(i as f64);
                rec(n, left - i, cur, out);
                cur.pop();
            }
        }
        rec(n, m, &mut Vec::new(), &mut grid);
        for x in &grid {
            values.push(x.iter().zip(&a).map(|(x, a)| x * a).sum::<f64>());
        }
        let t = TabulatedFunction::from_spec(spec(n, grid, values), &tol()).unwrap();
        let h = make_handle(HandleKind::Custom(t), &tol()).unwrap();
        for p in [[0.1, 0.2, 0.3, 0.4], [1.0, 0.0, 0.0, 2.0], [0.25, 0.25, 0.25, 0.25], [0.0, 0.0, 7.0, 0.0]] {
            let exact: f64 = p.iter().zip(&a).map(|(x, a)| x * a).sum();
            assert!((h.eval(&p).unwrap() - exact).abs() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn tabulated_lattice_must_be_complete() {
        let grid = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![0.5, 0.5, 0.0]];
        assert!(TabulatedFunction::from_spec(spec(3, grid, vec![1.0; 4]), &tol()).is_err());
    }
}
