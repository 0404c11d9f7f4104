//! Multi-start maximization of a positive function over the standard
//! simplex `{q ≥ 0, Σq = 1}`.
//!
//! Starting points are the simplex vertices, the barycenter and a batch of
//! Dirichlet(1, …, 1) samples. The best few are refined by pairwise ascent
//! steps (numerical directional derivatives toward each vertex, so every
//! probe stays feasible), pattern moves along the recent displacement, and
//! a shrinking poll that gets past kinks where difference quotients
//! mislead. The objectives met in practice are ratios of linear to convex
//! functions: quasi-concave, but often nonsmooth exactly at the optimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::OptimizerConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct MaximizerDiagnostics {
    pub starts: usize,
    pub evaluations: usize,
    pub iterations: usize,
    /// Final values of the refined starts, best first.
    pub local_optima: Vec<f64>,
    /// Spread between the best and worst refined local optimum.
    pub spread: f64,
}

#[derive(Debug, Clone)]
pub struct SimplexMaximum {
    pub point: Vec<f64>,
    pub value: f64,
    pub diagnostics: MaximizerDiagnostics,
}

struct Counted<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> Result<f64>> Counted<F> {
    fn eval(&mut self, q: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let v = (self.f)(q)?;
        Ok(if v.is_nan() { f64::NEG_INFINITY } else { v })
    }
}

pub fn simplex_maximize<F>(phi: F, n: usize, cfg: &OptimizerConfig) -> Result<SimplexMaximum>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if n == 0 {
        return Err(Error::InvalidInput("simplex dimension must be >= 1".into()));
    }
    let mut phi = Counted { f: phi, evaluations: 0 };
    if n == 1 {
        let value = phi.eval(&[1.0])?;
        return Ok(SimplexMaximum {
            point: vec![1.0],
            value,
            diagnostics: MaximizerDiagnostics {
                starts: 1,
                evaluations: 1,
                iterations: 0,
                local_optima: vec![value],
                spread: 0.0,
            },
        });
    }

    let starts = starting_points(n, cfg.random_starts, cfg.seed);
    let mut ranked = Vec::with_capacity(starts.len());
    for (i, q) in starts.iter().enumerate() {
        ranked.push((phi.eval(q)?, i));
    }
    // Best value first; equal values keep the lower start index.
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut refined: Vec<(f64, usize, Vec<f64>)> = Vec::new();
    let mut iterations = 0;
    for &(v0, idx) in ranked.iter().take(cfg.refine_top.max(1)) {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(idx as u64 + 1)));
        let budget = phi.evaluations + cfg.max_evals_per_start;
        let mut local = LocalSearch {
            x: starts[idx].clone(),
            fx: v0,
            n,
            tol: cfg.tol,
        };
        iterations += local.run(&mut phi, &mut rng, budget)?;
        refined.push((local.fx, idx, local.x));
    }
    refined.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let best_value = refined[0].0;
    let worst = refined.last().map(|r| r.0).unwrap_or(best_value);
    let local_optima = refined.iter().map(|r| r.0).collect();
    let (value, _, point) = refined.swap_remove(0);
    Ok(SimplexMaximum {
        point,
        value,
        diagnostics: MaximizerDiagnostics {
            starts: starts.len(),
            evaluations: phi.evaluations,
            iterations,
            local_optima,
            spread: best_value - worst,
        },
    })
}

/// Vertices, barycenter, then `random` Dirichlet(1, …, 1) samples.
pub fn starting_points(n: usize, random: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut pts = Vec::with_capacity(n + 1 + random);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        pts.push(e);
    }
    pts.push(vec![1.0 / n as f64; n]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        pts.push(dirichlet_uniform(n, &mut rng));
    }
    pts
}

pub(crate) fn dirichlet_uniform<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Euclidean projection onto the standard simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cum += uk;
        let t = (cum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    let mut out: Vec<f64> = v.iter().map(|x| (x - theta).max(0.0)).collect();
    let s: f64 = out.iter().sum();
    out.iter_mut().for_each(|x| *x /= s);
    out
}

struct LocalSearch {
    x: Vec<f64>,
    fx: f64,
    n: usize,
    tol: f64,
}

impl LocalSearch {
    fn run<F, R>(&mut self, phi: &mut Counted<F>, rng: &mut R, budget: usize) -> Result<usize>
    where
        F: FnMut(&[f64]) -> Result<f64>,
        R: Rng,
    {
        let step_min = (self.tol * 1e-2).max(1e-12);
        let mut step = 0.25;
        let mut iterations = 0;
        while step >= step_min && phi.evaluations < budget {
            iterations += 1;
            let (anchor, f0) = (self.x.clone(), self.fx);
            let moved = self.pairwise_phase(phi, budget)?;
            let polled = self.poll(phi, rng, step, budget)?;
            if self.fx > f0 {
                self.extrapolate(phi, &anchor, budget)?;
            }
            // Creeping progress counts as a stall so the search terminates.
            let significant = self.fx - f0 > self.tol * 1e-2 * self.fx.abs();
            if polled && significant {
                step = (step * 2.0).min(0.5);
            } else if !(moved && significant) {
                step *= 0.5;
            }
        }
        Ok(iterations)
    }

    fn improves(&self, v: f64) -> bool {
        v > self.fx
    }

    /// Pattern move along the last displacement `x − anchor`: doubles the
    /// stride while the value improves, up to the point where the line
    /// leaves the simplex (that point, which zeroes a coordinate, is always
    /// tried). Follows ridges that coordinate-wise moves only zigzag along.
    fn extrapolate<F>(&mut self, phi: &mut Counted<F>, anchor: &[f64], budget: usize) -> Result<bool>
    where
        F: FnMut(&[f64]) -> Result<f64>,
    {
        let dir: Vec<f64> = self.x.iter().zip(anchor).map(|(a, b)| a - b).collect();
        let gmax = self
            .x
            .iter()
            .zip(&dir)
            .filter(|(_, d)| **d < 0.0)
            .map(|(x, d)| x / -d)
            .fold(f64::INFINITY, f64::min);
        if !(gmax > 0.0) || !gmax.is_finite() {
            return Ok(false);
        }
        let point = |g: f64| -> Vec<f64> {
            let mut y: Vec<f64> = self.x.iter().zip(&dir).map(|(x, d)| (x + g * d).max(0.0)).collect();
            if g >= gmax {
                // Snap the coordinate(s) that define the boundary.
                for (yi, (x, d)) in y.iter_mut().zip(self.x.iter().zip(&dir)) {
                    if *d < 0.0 && x / -d <= gmax * (1.0 + 1e-12) {
                        *yi = 0.0;
                    }
                }
            }
            let s: f64 = y.iter().sum();
            y.iter_mut().for_each(|v| *v /= s);
            y
        };
        let mut moved = false;
        let mut g = 1.0f64.min(gmax);
        let mut best = (self.fx, None);
        while phi.evaluations < budget {
            let y = point(g);
            let fy = phi.eval(&y)?;
            if fy > best.0 {
                best = (fy, Some(y));
            } else {
                break;
            }
            if g >= gmax {
                break;
            }
            g = (2.0 * g).min(gmax);
        }
        if let (fy, Some(y)) = best {
            self.x = y;
            self.fx = fy;
            moved = true;
        }
        Ok(moved)
    }

    /// Pairwise ascent: move mass from the coordinate with the smallest
    /// directional derivative to the one with the largest, along
    /// `e_i − e_j`. The line search starts at the full transfer, which
    /// empties coordinate `j` and lands exactly on a face, and halves
    /// while that does not improve; since the objective is unimodal along
    /// lines in the quasi-concave case, it keeps halving while the value
    /// still rises. Returns whether any step was accepted.
    fn pairwise_phase<F>(&mut self, phi: &mut Counted<F>, budget: usize) -> Result<bool>
    where
        F: FnMut(&[f64]) -> Result<f64>,
    {
        let h = 1e-7;
        let n = self.n;
        let mut moved = false;
        let mut trail: Vec<Vec<f64>> = vec![self.x.clone()];
        for _ in 0..50 {
            if phi.evaluations + n >= budget {
                break;
            }
            if trail.len() >= 3 {
                let anchor = trail[trail.len() - 3].clone();
                if self.extrapolate(phi, &anchor, budget)? {
                    trail.push(self.x.clone());
                }
            }
            let mut d = vec![0.0; n];
            for (i, di) in d.iter_mut().enumerate() {
                let mut y: Vec<f64> = self.x.iter().map(|v| v * (1.0 - h)).collect();
                y[i] += h;
                *di = (phi.eval(&y)? - self.fx) / h;
            }
            if d.iter().any(|v| v.is_nan()) {
                break;
            }
            let up = (0..n).max_by(|&a, &b| d[a].total_cmp(&d[b]).then(b.cmp(&a))).unwrap();
            let down = (0..n)
                .filter(|&j| j != up && self.x[j] > 0.0)
                .min_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
            let Some(down) = down else { break };
            if !(d[up] - d[down] > 1e-12 * (1.0 + self.fx.abs())) {
                break;
            }
            let shift = |a: f64| {
                let mut y = self.x.clone();
                let a = a.min(y[down]);
                y[up] += a;
                y[down] -= a;
                if y[down] < 1e-15 {
                    y[down] = 0.0;
                }
                y
            };
            let mut a = self.x[down];
            let mut best: Option<(f64, Vec<f64>)> = None;
            while a > 1e-15 && phi.evaluations < budget {
                let y = shift(a);
                let fy = phi.eval(&y)?;
                match &best {
                    None if self.improves(fy) => best = Some((fy, y)),
                    Some((fb, _)) if fy > *fb => best = Some((fy, y)),
                    Some(_) => break,
                    None => {}
                }
                a *= 0.5;
            }
            let Some((fy, y)) = best else { break };
            let gain = fy - self.fx;
            self.x = y;
            self.fx = fy;
            trail.push(self.x.clone());
            moved = true;
            if gain <= self.tol * 1e-3 * self.fx.abs() {
                break;
            }
        }
        Ok(moved)
    }

    /// Opportunistic poll at radius `step`: moves toward each vertex, mass
    /// transfers between coordinates, and a few random tangent directions.
    fn poll<F, R>(&mut self, phi: &mut Counted<F>, rng: &mut R, step: f64, budget: usize) -> Result<bool>
    where
        F: FnMut(&[f64]) -> Result<f64>,
        R: Rng,
    {
        let n = self.n;
        let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(n * n + 2 * n);
        // Truncating the support to the k largest coordinates jumps onto a
        // face in one move; optima of ratios of linear to piecewise-linear
        // functions often sit at such face points, where no single-coordinate
        // move improves.
        let mut order: Vec<usize> = (0..n).filter(|&j| self.x[j] > 0.0).collect();
        order.sort_by(|&a, &b| self.x[b].total_cmp(&self.x[a]).then(a.cmp(&b)));
        for k in (1..order.len()).rev() {
            let mut y = vec![0.0; n];
            for &j in &order[..k] {
                y[j] = self.x[j];
            }
            let s: f64 = y.iter().sum();
            y.iter_mut().for_each(|v| *v /= s);
            candidates.push(y);
        }
        for i in 0..n {
            let mut y: Vec<f64> = self.x.iter().map(|v| v * (1.0 - step)).collect();
            y[i] += step;
            candidates.push(y);
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.x[j] > 0.0 {
                    let a = step.min(self.x[j]);
                    let mut y = self.x.clone();
                    y[i] += a;
                    y[j] -= a;
                    y[j] = y[j].max(0.0);
                    candidates.push(y);
                }
            }
        }
        // Fresh random tangent directions and their negatives each poll, so
        // the poll directions become dense and kinks where every coordinate
        // move fails are eventually escaped.
        for _ in 0..2 * n {
            let mut z: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
            let mean = z.iter().sum::<f64>() / n as f64;
            z.iter_mut().for_each(|v| *v -= mean);
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                for sign in [1.0, -1.0] {
                    let y: Vec<f64> = self.x.iter().zip(&z).map(|(a, b)| a + sign * step * b / norm).collect();
                    candidates.push(project_to_simplex(&y));
                }
            }
        }
        for y in candidates {
            if phi.evaluations >= budget {
                break;
            }
            let fy = phi.eval(&y)?;
            if self.improves(fy) {
                self.x = y;
                self.fx = fy;
                return Ok(true);
            }
        }
        Ok(false)
    }
}
