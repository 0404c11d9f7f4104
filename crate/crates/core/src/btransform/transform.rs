use std::collections::HashMap;

use serde::Serialize;

use super::handle::{check_point, FunctionHandle};
use crate::config::{OptimizerConfig, Tolerances};
use crate::error::{Error, Result};
use crate::opt::{dirichlet_uniform, lp_solve, simplex_maximize, LpProblem, MaximizerDiagnostics, Relation, Sense};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of one transform evaluation at `point`.
#[derive(Debug, Clone, Serialize)]
pub struct TransformReport {
    pub point: Vec<f64>,
    pub value: f64,
    /// Maximizing `q` on the simplex; `value = ⟨point, argmax⟩ / g(argmax)`
    /// where `g` is the function being transformed.
    pub argmax: Vec<f64>,
    /// Set when the transformed function is not declared convex: the value
    /// is then only the best found, a lower bound on the supremum.
    pub heuristic: bool,
    pub diagnostics: MaximizerDiagnostics,
    /// Nested transforms only: the cutting-plane model's estimate from
    /// above at termination.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_bound: Option<f64>,
}

/// Rounds the normalized direction of `p` to 2⁻⁴⁰ so that positive
/// multiples of a point drive the optimizer through identical iterates.
fn direction(p: &[f64], s: f64) -> Vec<f64> {
    const GRID: f64 = (1u64 << 40) as f64;
    p.iter().map(|x| (x / s * GRID).round() / GRID).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn zero_report(p: &[f64], heuristic: bool) -> TransformReport {
    let mut argmax = vec![0.0; p.len()];
    argmax[0] = 1.0;
    TransformReport {
        point: p.to_vec(),
        value: 0.0,
        argmax,
        heuristic,
        diagnostics: MaximizerDiagnostics {
            starts: 0,
            evaluations: 0,
            iterations: 0,
            local_optima: Vec::new(),
            spread: 0.0,
        },
        model_bound: None,
    }
}

/// `(𝔅f)(p) = max over the simplex of ⟨p,q⟩ / f(q)`.
///
/// For convex `f` the ratio is quasi-concave and the multi-start search
/// meets the maximizer's relative tolerance; otherwise the result is the
/// best value found.
pub fn beval(f: &FunctionHandle, p: &[f64], cfg: &OptimizerConfig) -> Result<TransformReport> {
    let n = f.dim();
    check_point(p, n)?;
    let heuristic = !f.is_convex();
    let s: f64 = p.iter().sum();
    if s == 0.0 {
        return Ok(zero_report(p, heuristic));
    }
    let dir = direction(p, s);
    let max = simplex_maximize(
        |q: &[f64]| {
            let fq = f.eval(q)?;
            if !(fq > 0.0) {
                return Err(Error::Audit {
                    axiom: "nondegenerate",
                    detail: format!("{}({q:?}) = {fq}", f.name()),
                });
            }
            Ok(dot(&dir, q) / fq)
        },
        n,
        cfg,
    )?;
    let mut diagnostics = max.diagnostics;
    let mut argmax = max.point;
    if f.is_convex() && f.is_monotone() {
        let (q, evaluations) = polish_convex(f, &dir, &argmax, cfg)?;
        diagnostics.evaluations += evaluations;
        argmax = q;
    }
    let value = dot(p, &argmax) / f.eval(&argmax)?;
    Ok(TransformReport {
        point: p.to_vec(),
        value,
        argmax,
        heuristic,
        diagnostics,
        model_bound: None,
    })
}

const POLISH_ROUNDS: usize = 60;

/// Kelley refinement of a local-search maximizer for convex, monotone `f`.
///
/// Such an `f` is sublinear, so every gradient, taken anywhere, gives a
/// global minorant `⟨g,·⟩ ≤ f`; with the vertex minorants `f(e_i) q_i`
/// they bound the ratio from above through the LP `max ⟨dir,q⟩` subject to
/// `⟨g,q⟩ ≤ 1`. Gradients are central differences at points nudged off the
/// LP solution, so that piecewise-linear `f` are sampled inside a piece;
/// a gradient is kept only if it satisfies Euler's identity and stays below
/// every value seen so far. The result is always an evaluated point.
fn polish_convex(f: &FunctionHandle, dir: &[f64], start: &[f64], cfg: &OptimizerConfig) -> Result<(Vec<f64>, usize)> {
    const NUDGE: f64 = 1e-3;
    const STEP: f64 = 1e-6;
    const EULER_TOL: f64 = 1e-5;
    let n = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_c0de);
    let mut evaluations = 0;
    let mut seen: Vec<(Vec<f64>, f64)> = Vec::new();
    let eval = |q: &[f64], seen: &mut Vec<(Vec<f64>, f64)>, evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        let v = f.eval(q)?;
        seen.push((q.to_vec(), v));
        Ok(v)
    };

    let mut cuts = Vec::with_capacity(n + POLISH_ROUNDS);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        let fe = eval(&e, &mut seen, &mut evaluations)?;
        if !(fe > 0.0) {
            return Ok((start.to_vec(), evaluations));
        }
        cuts.push(e.iter().map(|x| x * fe).collect::<Vec<_>>());
    }
    let mut best_q = start.to_vec();
    let mut best = dot(dir, start) / eval(start, &mut seen, &mut evaluations)?;

    let mut gradient_cut = |q: &[f64], seen: &mut Vec<(Vec<f64>, f64)>, evaluations: &mut usize| -> Result<Option<Vec<f64>>> {
        for _ in 0..3 {
            let u = dirichlet_uniform(n, &mut rng);
            let y: Vec<f64> = q.iter().zip(&u).map(|(a, b)| (1.0 - NUDGE) * a + NUDGE * b).collect();
            let fy = eval(&y, seen, evaluations)?;
            let mut g = vec![0.0; n];
            for i in 0..n {
                let mut hi = y.clone();
                hi[i] += STEP;
                let up = eval(&hi, seen, evaluations)?;
                g[i] = if y[i] > STEP {
                    let mut lo = y.clone();
                    lo[i] -= STEP;
                    (up - eval(&lo, seen, evaluations)?) / (2.0 * STEP)
                } else {
                    (up - fy) / STEP
                };
            }
            let euler = (dot(&g, &y) - fy).abs() <= EULER_TOL * fy;
            let below = seen.iter().all(|(x, fx)| dot(&g, x) <= fx * (1.0 + EULER_TOL) + 1e-12);
            if euler && below {
                return Ok(Some(g));
            }
        }
        Ok(None)
    };

    let lp_tol = Tolerances::default();
    let mut query = start.to_vec();
    for _ in 0..POLISH_ROUNDS {
        let Some(g) = gradient_cut(&query, &mut seen, &mut evaluations)? else { break };
        // A repeated piece adds nothing and only degrades the LP's conditioning.
        let scale = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if cuts.iter().any(|c| c.iter().zip(&g).all(|(a, b)| (a - b).abs() <= 1e-7 * scale)) {
            break;
        }
        cuts.push(g);
        let mut lp = LpProblem::new(Sense::Max, dir.to_vec());
        for c in &cuts {
            lp.push(c.clone(), Relation::Le, 1.0);
        }
        // The refinement is optional: a numerically troubled LP ends it.
        let Ok(sol) = lp_solve(&lp, &lp_tol) else { break };
        let mass: f64 = sol.primal.iter().sum();
        if !sol.is_optimal() || mass <= 0.0 || sol.value <= best * (1.0 + cfg.tol / 4.0) {
            break;
        }
        query = sol.primal.iter().map(|x| (x / mass).max(0.0)).collect();
        let fq = eval(&query, &mut seen, &mut evaluations)?;
        if fq > 0.0 && dot(dir, &query) / fq > best {
            best = dot(dir, &query) / fq;
            best_q = query.clone();
        }
    }
    Ok((best_q, evaluations))
}

fn inner_config(cfg: &OptimizerConfig) -> OptimizerConfig {
    OptimizerConfig {
        tol: cfg.tol / 4.0,
        ..cfg.clone()
    }
}

/// `(𝔅²f)(p)`: the outer transform of `𝔅f`, with `𝔅f` evaluated by
/// [`beval`] at a quarter of the outer tolerance.
///
/// Because `𝔅f` is convex, the outer problem is solved by cutting planes:
/// every inner evaluation at `q` with maximizer `r` yields the linear
/// minorant `⟨·, r/f(r)⟩` of `𝔅f`, and the LP `max ⟨p,q⟩` subject to those
/// minorants being at most one bounds the outer supremum from above.
pub fn bsquare(f: &FunctionHandle, p: &[f64], cfg: &OptimizerConfig) -> Result<TransformReport> {
    let inner = inner_config(cfg);
    outer_transform(p, f.dim(), cfg.tol, !f.is_convex(), |q| beval(f, q, &inner))
}

/// `(𝔅³f)(p)`, nesting [`bsquare`] the same way.
pub fn bcube(f: &FunctionHandle, p: &[f64], cfg: &OptimizerConfig) -> Result<TransformReport> {
    let inner = inner_config(cfg);
    outer_transform(p, f.dim(), cfg.tol, !f.is_convex(), |q| bsquare(f, q, &inner))
}

/// `𝔅f` as a handle of its own. It is convex and monotone by construction,
/// and bounds `(c1, c2)` on `f` become `(1/c2, 1/c1)`.
pub fn transformed_handle(f: &FunctionHandle, cfg: &OptimizerConfig) -> FunctionHandle {
    let inner = f.clone();
    let cfg = cfg.clone();
    let h = FunctionHandle::new(format!("B({})", f.name()), f.dim(), true, true, move |p: &[f64]| {
        Ok(beval(&inner, p, &cfg)?.value)
    });
    match f.bounds() {
        Some((c1, c2)) => h.with_bounds(1.0 / c2, 1.0 / c1),
        None => h,
    }
}

const MAX_ROUNDS: usize = 400;

/// `sup_q ⟨p,q⟩ / g(q)` for convex `g` given by an oracle that returns a
/// transform report for `g` (so `g(q) = ⟨q,r⟩ / h(r)` at its maximizer `r`).
fn outer_transform<O>(p: &[f64], n: usize, tol: f64, heuristic: bool, mut oracle: O) -> Result<TransformReport>
where
    O: FnMut(&[f64]) -> Result<TransformReport>,
{
    check_point(p, n)?;
    let s: f64 = p.iter().sum();
    if s == 0.0 {
        return Ok(zero_report(p, heuristic));
    }
    let dir = direction(p, s);
    let lp_tol = Tolerances::default();

    // Evaluations keyed by the query point rounded to 1e-12.
    let mut cache: HashMap<Vec<i64>, f64> = HashMap::new();
    let mut cuts: Vec<Vec<f64>> = Vec::new();
    let mut evaluations = 0;
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let mut history = Vec::new();

    let mut probe = |q: &[f64],
                     cuts: &mut Vec<Vec<f64>>,
                     best: &mut Option<(f64, Vec<f64>, f64)>|
     -> Result<bool> {
        let key: Vec<i64> = q.iter().map(|x| (x * 1e12).round() as i64).collect();
        if cache.contains_key(&key) {
            return Ok(false);
        }
        let rep = oracle(q)?;
        let g = rep.value;
        cache.insert(key, g);
        if !(g > 0.0) {
            return Err(Error::Solver(format!("inner transform returned {g} at {q:?}")));
        }
        let qr = dot(q, &rep.argmax);
        if qr > 0.0 {
            cuts.push(rep.argmax.iter().map(|r| r * g / qr).collect());
        }
        let ratio = dot(&dir, q) / g;
        if best.as_ref().map_or(true, |b| ratio > b.0) {
            *best = Some((ratio, q.to_vec(), g));
        }
        Ok(true)
    };

    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        evaluations += probe(&e, &mut cuts, &mut best)? as usize;
    }
    evaluations += probe(&vec![1.0 / n as f64; n], &mut cuts, &mut best)? as usize;
    let starts = evaluations;

    let mut upper = f64::INFINITY;
    let mut rounds = 0;
    while rounds < MAX_ROUNDS {
        rounds += 1;
        let mut lp = LpProblem::new(Sense::Max, dir.clone());
        for c in &cuts {
            lp.push(c.clone(), Relation::Le, 1.0);
        }
        let sol = lp_solve(&lp, &lp_tol)?;
        if !sol.is_optimal() {
            return Err(Error::Solver(format!("cutting-plane LP returned {:?}", sol.status)));
        }
        upper = sol.value;
        history.push(upper);
        let mass: f64 = sol.primal.iter().sum();
        let best_ratio = best.as_ref().map_or(0.0, |b| b.0);
        if upper <= best_ratio * (1.0 + tol) || mass <= 0.0 {
            break;
        }
        let q: Vec<f64> = sol.primal.iter().map(|x| (x / mass).max(0.0)).collect();
        if !probe(&q, &mut cuts, &mut best)? {
            break;
        }
        evaluations += 1;
    }

    let (_, q, g) = best.expect("at least one probe");
    let value = dot(p, &q) / g;
    Ok(TransformReport {
        point: p.to_vec(),
        value,
        argmax: q,
        heuristic,
        diagnostics: MaximizerDiagnostics {
            starts,
            evaluations,
            iterations: rounds,
            local_optima: history.iter().map(|u| s * u).collect(),
            spread: (s * upper - value).max(0.0),
        },
        model_bound: Some(s * upper),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::btransform::{make_handle, HandleKind};
    use crate::graph::Graph;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    fn norm(n: usize, r: f64) -> FunctionHandle {
        make_handle(HandleKind::NormP { n, r }, &tol()).unwrap()
    }

    #[test]
    fn euclidean_norm_is_fixed() {
        let rep = beval(&norm(2, 2.0), &[3.0, 4.0], &cfg()).unwrap();
        assert!((rep.value - 5.0).abs() < 1e-6, "{}", rep.value);
        assert!(!rep.heuristic);
        assert!((rep.argmax[0] / rep.argmax[1] - 0.75).abs() < 1e-3);
    }

    #[test]
    fn linear_form_attains_a_vertex() {
        let f = make_handle(HandleKind::Linear { a: vec![1.0, 2.0] }, &tol()).unwrap();
        let rep = beval(&f, &[1.0, 1.0], &cfg()).unwrap();
        assert_eq!(rep.value, 1.0);
        assert_eq!(rep.argmax, vec![1.0, 0.0]);
    }

    #[test]
    fn report_value_matches_argmax() {
        let f = norm(3, 3.0);
        let p = [0.3, 1.7, 0.4];
        let rep = beval(&f, &p, &cfg()).unwrap();
        let direct = dot(&p, &rep.argmax) / f.eval(&rep.argmax).unwrap();
        assert!((rep.value - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn alpha_of_c5_transforms_to_fractional_packing() {
        let f = make_handle(HandleKind::GraphAlpha(Graph::cycle(5).unwrap()), &tol()).unwrap();
        let rep = beval(&f, &[1.0; 5], &cfg()).unwrap();
        assert!((rep.value - 2.5).abs() < 2.5e-4, "{}", rep.value);
    }

    #[test]
    fn zero_point_and_bad_input() {
        let f = norm(2, 2.0);
        assert_eq!(beval(&f, &[0.0, 0.0], &cfg()).unwrap().value, 0.0);
        assert!(beval(&f, &[1.0, -1.0], &cfg()).is_err());
        assert!(beval(&f, &[1.0], &cfg()).is_err());
        assert_eq!(bsquare(&f, &[0.0, 0.0], &cfg()).unwrap().value, 0.0);
    }

    #[test]
    fn bsquare_examples() {
        let e = bsquare(&norm(2, 2.0), &[1.0, 2.0], &cfg()).unwrap();
        assert!((e.value - 5f64.sqrt()).abs() < 1e-3, "{e:?}");
        let half = bsquare(&norm(2, 0.5), &[1.0, 1.0], &cfg()).unwrap();
        assert!((half.value - 2.0).abs() < 1e-6, "{half:?}");
        assert!(half.heuristic);
    }

    #[test]
    fn bsquare_theta_c5() {
        let f = make_handle(HandleKind::GraphTheta(Graph::cycle(5).unwrap()), &tol()).unwrap();
        let t = std::time::Instant::now();
        let rep = bsquare(&f, &[1.0; 5], &cfg()).unwrap();
        eprintln!("theta bsquare: {rep:?} in {:?}", t.elapsed());
        assert!((rep.value - 5f64.sqrt()).abs() < 1e-3 * 5f64.sqrt());
    }

    #[test]
    fn bcube_of_linear_form() {
        let f = make_handle(HandleKind::Linear { a: vec![1.0, 2.0] }, &tol()).unwrap();
        for p in [[1.0, 1.0], [0.2, 3.0], [2.0, 0.5]] {
            let b1 = beval(&f, &p, &cfg()).unwrap().value;
            let b3 = bcube(&f, &p, &cfg()).unwrap().value;
            assert!((b1 - b3).abs() <= 1e-3 * b1, "{p:?}: {b1} vs {b3}");
            // 𝔅⟨a,·⟩ = max_i p_i / a_i.
            assert!((b1 - (p[0] / 1.0).max(p[1] / 2.0)).abs() < 1e-9);
        }
    }
}
