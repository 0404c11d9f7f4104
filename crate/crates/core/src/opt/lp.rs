//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Problems are tiny (tens of rows), so the full tableau is kept and the
//! final basis is re-solved against the original data to clean up
//! round-off in both the primal point and the row multipliers.

use nalgebra::{DMatrix, DVector};

use crate::config::Tolerances;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// `sense cᵀx` subject to `A x (rel) b`, `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        Self {
            sense,
            objective,
            rows: Vec::new(),
            relations: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn constraint(mut self, row: Vec<f64>, rel: Relation, rhs: f64) -> Self {
        self.push(row, rel, rhs);
        self
    }

    pub fn push(&mut self, row: Vec<f64>, rel: Relation, rhs: f64) {
        self.rows.push(row);
        self.relations.push(rel);
        self.rhs.push(rhs);
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.relations.len() != self.rows.len() || self.rhs.len() != self.rows.len() {
            return Err(Error::Dimension(format!(
                "{} rows, {} relations, {} right-hand sides",
                self.rows.len(),
                self.relations.len(),
                self.rhs.len()
            )));
        }
        if let Some((i, r)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {i} has {} coefficients, expected {n}",
                r.len()
            )));
        }
        let finite = self.objective.iter().chain(&self.rhs).chain(self.rows.iter().flatten());
        if finite.into_iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("LP data must be finite".into()));
        }
        Ok(())
    }

    /// Objective value of `x`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `dual` holds row multipliers `y` with `value = bᵀy` and
/// `c − Aᵀy` of the sign that certifies optimality for the problem sense.
#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub primal: Vec<f64>,
    pub dual: Vec<f64>,
}

/// Residuals of an optimal solution.
#[derive(Debug, Clone, Copy)]
pub struct LpResiduals {
    /// Largest violation of a row or of `x ≥ 0`.
    pub primal: f64,
    /// Largest violation of dual sign or reduced-cost conditions.
    pub dual: f64,
    pub gap: f64,
    pub complementary_slackness: f64,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn residuals(&self, p: &LpProblem) -> LpResiduals {
        let sign = match p.sense {
            Sense::Max => 1.0,
            Sense::Min => -1.0,
        };
        let mut primal = self.primal.iter().map(|&x| (-x).max(0.0)).fold(0.0, f64::max);
        let mut dual = 0.0f64;
        let mut cs = 0.0f64;
        for (i, row) in p.rows.iter().enumerate() {
            let ax = dot(row, &self.primal);
            let slack = p.rhs[i] - ax;
            let y = self.dual[i];
            let (viol, dual_viol) = match p.relations[i] {
                Relation::Le => ((-slack).max(0.0), (-sign * y).max(0.0)),
                Relation::Ge => (slack.max(0.0), (sign * y).max(0.0)),
                Relation::Eq => (slack.abs(), 0.0),
            };
            primal = primal.max(viol);
            dual = dual.max(dual_viol);
            cs = cs.max((y * slack).abs());
        }
        for j in 0..p.num_vars() {
            let reduced = p.objective[j]
                - p.rows.iter().zip(&self.dual).map(|(r, y)| r[j] * y).sum::<f64>();
            dual = dual.max((sign * reduced).max(0.0));
            cs = cs.max((reduced * self.primal[j]).abs());
        }
        let dual_value = dot(&p.rhs, &self.dual);
        LpResiduals {
            primal,
            dual,
            gap: (p.evaluate(&self.primal) - dual_value).abs(),
            complementary_slackness: cs,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `p`. Infeasibility and unboundedness are statuses; malformed
/// input and residual failures are errors.
pub fn lp_solve(p: &LpProblem, tol: &Tolerances) -> Result<LpSolution> {
    p.validate()?;
    let sol = Tableau::build(p, tol.lp_pivot).solve(p)?;
    if sol.is_optimal() {
        let r = sol.residuals(p);
        let b_norm = p.rhs.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        if r.primal > tol.lp_feasibility * (1.0 + b_norm)
            || r.gap > tol.lp_duality_gap * (1.0 + sol.value.abs())
        {
            return Err(Error::Solver(format!(
                "LP residuals too large: primal {:.3e}, gap {:.3e}",
                r.primal, r.gap
            )));
        }
    }
    Ok(sol)
}

struct Tableau {
    /// `m` constraint rows followed by the objective row; last column is rhs.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_struct: usize,
    /// For auxiliary column `n_struct + k`: the row it belongs to and its sign.
    aux: Vec<(usize, f64)>,
    artificial_start: usize,
    /// Rows multiplied by −1 to make the rhs non-negative.
    flipped: Vec<bool>,
    eps: f64,
}

impl Tableau {
    fn build(p: &LpProblem, eps: f64) -> Self {
        let m = p.num_rows();
        let n = p.num_vars();
        let mut rels = p.relations.clone();
        let mut flipped = vec![false; m];
        for i in 0..m {
            if p.rhs[i] < 0.0 {
                flipped[i] = true;
                rels[i] = match rels[i] {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }
        let mut aux = Vec::new();
        for (i, r) in rels.iter().enumerate() {
            match r {
                Relation::Le => aux.push((i, 1.0)),
                Relation::Ge => aux.push((i, -1.0)),
                Relation::Eq => {}
            }
        }
        let artificial_start = n + aux.len();
        for (i, r) in rels.iter().enumerate() {
            if *r != Relation::Le {
                aux.push((i, 1.0));
            }
        }
        let width = n + aux.len() + 1;
        let mut t = vec![vec![0.0; width]; m + 1];
        let mut basis = vec![usize::MAX; m];
        for i in 0..m {
            let sgn = if flipped[i] { -1.0 } else { 1.0 };
            for j in 0..n {
                t[i][j] = sgn * p.rows[i][j];
            }
            t[i][width - 1] = sgn * p.rhs[i];
        }
        for (k, &(i, sgn)) in aux.iter().enumerate() {
            let j = n + k;
            t[i][j] = sgn;
            if sgn > 0.0 && (j >= artificial_start || rels[i] == Relation::Le) {
                basis[i] = j;
            }
        }
        Self {
            t,
            basis,
            n_struct: n,
            aux,
            artificial_start,
            flipped,
            eps,
        }
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn width(&self) -> usize {
        self.t[0].len()
    }

    /// Installs `cost` (minimization) as the objective row, priced out
    /// against the current basis.
    fn set_objective(&mut self, cost: &[f64]) {
        let m = self.m();
        let w = self.width();
        let mut row = vec![0.0; w];
        row[..cost.len()].copy_from_slice(cost);
        for i in 0..m {
            let cb = cost.get(self.basis[i]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..w {
                    row[j] -= cb * self.t[i][j];
                }
            }
        }
        self.t[m] = row;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let pv = self.t[r][c];
        for j in 0..w {
            self.t[r][j] /= pv;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    for j in 0..w {
                        row[j] -= f * pivot_row[j];
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule iterations over columns `0..allowed`. Returns false on
    /// unboundedness.
    fn run(&mut self, allowed: usize) -> bool {
        let m = self.m();
        let rhs = self.width() - 1;
        loop {
            let Some(c) = (0..allowed).find(|&j| self.t[m][j] < -self.eps) else {
                return true;
            };
            let mut best: Option<(f64, usize)> = None;
            for i in 0..m {
                let a = self.t[i][c];
                if a > self.eps {
                    let ratio = self.t[i][rhs] / a;
                    let better = match best {
                        None => true,
                        Some((br, bi)) => {
                            ratio < br - self.eps
                                || (ratio <= br + self.eps && self.basis[i] < self.basis[bi])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            match best {
                Some((_, r)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn solve(mut self, p: &LpProblem) -> Result<LpSolution> {
        let m = self.m();
        let w = self.width();
        let rhs = w - 1;
        let n_vars = p.num_vars();

        if self.artificial_start < rhs {
            let phase1: Vec<f64> = (0..rhs)
                .map(|j| if j >= self.artificial_start { 1.0 } else { 0.0 })
                .collect();
            self.set_objective(&phase1);
            self.run(rhs);
            let infeas = -self.t[m][rhs];
            let scale = 1.0 + p.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if infeas > 1e-9 * scale {
                return Ok(LpSolution {
                    status: LpStatus::Infeasible,
                    value: f64::NAN,
                    primal: vec![0.0; n_vars],
                    dual: vec![0.0; m],
                });
            }
            // Drive zero-level artificials out of the basis where possible;
            // rows where that fails are redundant.
            for i in 0..m {
                if self.basis[i] >= self.artificial_start {
                    if let Some(c) = (0..self.artificial_start).find(|&j| self.t[i][j].abs() > 1e-9) {
                        self.pivot(i, c);
                    }
                }
            }
        }

        let sign = match p.sense {
            Sense::Min => 1.0,
            Sense::Max => -1.0,
        };
        let cost: Vec<f64> = p.objective.iter().map(|c| sign * c).collect();
        self.set_objective(&cost);
        if !self.run(self.artificial_start) {
            return Ok(LpSolution {
                status: LpStatus::Unbounded,
                value: -sign * f64::INFINITY,
                primal: vec![0.0; n_vars],
                dual: vec![0.0; m],
            });
        }

        let (primal, dual) = self.refine(p, &cost, sign);
        Ok(LpSolution {
            status: LpStatus::Optimal,
            value: p.evaluate(&primal),
            primal,
            dual,
        })
    }

    /// Re-solves `B x_B = b` and `Bᵀ y = c_B` on the original data, falling
    /// back to the tableau values if the basis matrix is singular.
    fn refine(&self, p: &LpProblem, cost: &[f64], sign: f64) -> (Vec<f64>, Vec<f64>) {
        let m = self.m();
        let n = self.n_struct;
        let rhs = self.width() - 1;
        let column = |j: usize| -> DVector<f64> {
            if j < n {
                DVector::from_fn(m, |i, _| if self.flipped[i] { -p.rows[i][j] } else { p.rows[i][j] })
            } else {
                let (row, sgn) = self.aux[j - n];
                let mut v = DVector::zeros(m);
                v[row] = sgn;
                v
            }
        };
        let b = DVector::from_fn(m, |i, _| if self.flipped[i] { -p.rhs[i] } else { p.rhs[i] });
        let mut basis_matrix = DMatrix::zeros(m, m);
        for (k, &j) in self.basis.iter().enumerate() {
            basis_matrix.set_column(k, &column(j));
        }
        let cb = DVector::from_fn(m, |k, _| cost.get(self.basis[k]).copied().unwrap_or(0.0));

        let mut x = vec![0.0; n];
        let mut y: Vec<f64> = match (
            basis_matrix.clone().lu().solve(&b),
            basis_matrix.transpose().lu().solve(&cb),
        ) {
            (Some(xb), Some(y)) if xb.iter().chain(y.iter()).all(|v| v.is_finite()) => {
                for (k, &j) in self.basis.iter().enumerate() {
                    if j < n {
                        x[j] = xb[k].max(0.0);
                    }
                }
                y.iter().copied().collect()
            }
            _ => {
                for (k, &j) in self.basis.iter().enumerate() {
                    if j < n {
                        x[j] = self.t[k][rhs].max(0.0);
                    }
                }
                // y_i = c_B B⁻¹ e_i, read off the reduced cost of the
                // column that started as e_i.
                (0..m)
                    .map(|i| {
                        let j = (0..self.aux.len())
                            .map(|k| n + k)
                            .find(|&j| self.aux[j - n] == (i, 1.0))
                            .expect("every row owns a unit column");
                        -self.t[m][j]
                    })
                    .collect()
            }
        };
        for (i, yi) in y.iter_mut().enumerate() {
            if self.flipped[i] {
                *yi = -*yi;
            }
            *yi *= sign;
        }
        (x, y)
    }
}
