//! Primal–dual interior-point method for
//!
//! ```text
//! maximize ⟨C, X⟩  subject to  tr X = 1,  X_ij = 0 for (i, j) ∈ Z,  X ⪰ 0
//! ```
//!
//! with the HKM search direction and a Mehrotra predictor–corrector step.
//! The constraint family is fixed (trace plus symmetric zero pattern), so
//! the Schur complement is assembled entry by entry without forming the
//! constraint matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::config::Tolerances;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SdpProblem {
    c: DMatrix<f64>,
    zeros: Vec<(usize, usize)>,
}

impl SdpProblem {
    /// `zeros` lists off-diagonal index pairs; each unordered pair is kept once.
    pub fn new(c: DMatrix<f64>, zeros: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = c.nrows();
        if n == 0 || c.ncols() != n {
            return Err(Error::Dimension(format!(
                "objective must be square and non-empty, got {}x{}",
                c.nrows(),
                c.ncols()
            )));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("SDP objective must be finite".into()));
        }
        let asym = (&c - c.transpose()).amax();
        if asym > 1e-12 * (1.0 + c.amax()) {
            return Err(Error::InvalidInput(format!("objective is not symmetric (|C - Cᵀ| = {asym:e})")));
        }
        let mut pairs = Vec::new();
        for (i, j) in zeros {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidInput(format!(
                    "zero-pattern entry ({i}, {j}) must be off-diagonal and in range"
                )));
            }
            pairs.push((i.min(j), i.max(j)));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self { c, zeros: pairs })
    }

    pub fn order(&self) -> usize {
        self.c.nrows()
    }

    pub fn objective(&self) -> &DMatrix<f64> {
        &self.c
    }

    pub fn zero_pattern(&self) -> &[(usize, usize)] {
        &self.zeros
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    /// Iteration limit or numerical breakdown; the best iterate is reported.
    NotConverged,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// `⟨C, X⟩` at the returned primal point.
    pub value: f64,
    /// Dual objective, an upper bound on the optimum.
    pub dual_bound: f64,
    pub x: DMatrix<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SdpResiduals {
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub pattern: f64,
    pub gap: f64,
}

impl SdpSolution {
    pub fn residuals(&self, p: &SdpProblem) -> SdpResiduals {
        let eig = SymmetricEigen::new(self.x.clone());
        SdpResiduals {
            min_eigenvalue: eig.eigenvalues.min(),
            trace: (self.x.trace() - 1.0).abs(),
            pattern: p
                .zeros
                .iter()
                .map(|&(i, j)| self.x[(i, j)].abs().max(self.x[(j, i)].abs()))
                .fold(0.0, f64::max),
            gap: self.dual_bound - self.value,
        }
    }
}

pub fn sdp_solve(p: &SdpProblem, tol: &Tolerances) -> Result<SdpSolution> {
    let n = p.order();
    if n > tol.sdp_order_cap {
        return Err(Error::Solver(format!(
            "SDP order {n} exceeds cap {}",
            tol.sdp_order_cap
        )));
    }
    Ipm::new(p).run(tol.sdp_gap, tol.sdp_accept_gap, tol.sdp_max_iterations)
}

/// Constraint `k`: `k = 0` is the trace, `k ≥ 1` is `2 X_ij = 0` for the
/// `(k−1)`-th zero pair (matrix `E_ij + E_ji`).
struct Ipm<'a> {
    p: &'a SdpProblem,
    n: usize,
    m: usize,
}

struct Iterate {
    x: DMatrix<f64>,
    y: DVector<f64>,
    s: DMatrix<f64>,
}

impl<'a> Ipm<'a> {
    fn new(p: &'a SdpProblem) -> Self {
        Self {
            p,
            n: p.order(),
            m: 1 + p.zeros.len(),
        }
    }

    /// `A(Z)_k = ⟨A_k, Z⟩` for a general square `Z`.
    fn op(&self, z: &DMatrix<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.m);
        out[0] = z.trace();
        for (k, &(i, j)) in self.p.zeros.iter().enumerate() {
            out[k + 1] = z[(i, j)] + z[(j, i)];
        }
        out
    }

    /// `Aᵀ(y) = Σ y_k A_k`.
    fn adjoint(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::from_diagonal_element(self.n, self.n, y[0]);
        for (k, &(i, j)) in self.p.zeros.iter().enumerate() {
            out[(i, j)] += y[k + 1];
            out[(j, i)] += y[k + 1];
        }
        out
    }

    /// Schur complement `M_kl = tr(A_k X A_l S⁻¹)`.
    fn schur(&self, x: &DMatrix<f64>, sinv: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.m;
        let mut mat = DMatrix::zeros(m, m);
        let xs = x * sinv;
        mat[(0, 0)] = x.component_mul(sinv).sum();
        for (k, &(i, j)) in self.p.zeros.iter().enumerate() {
            let v = xs[(i, j)] + xs[(j, i)];
            mat[(0, k + 1)] = v;
            mat[(k + 1, 0)] = v;
        }
        for (k, &(a, b)) in self.p.zeros.iter().enumerate() {
            for (l, &(i, j)) in self.p.zeros.iter().enumerate().skip(k) {
                let v = x[(b, i)] * sinv[(j, a)]
                    + x[(b, j)] * sinv[(i, a)]
                    + x[(a, i)] * sinv[(j, b)]
                    + x[(a, j)] * sinv[(i, b)];
                mat[(k + 1, l + 1)] = v;
                mat[(l + 1, k + 1)] = v;
            }
        }
        mat
    }

    fn run(&self, gap_tol: f64, accept_gap: f64, max_iter: usize) -> Result<SdpSolution> {
        let n = self.n;
        let c = &self.p.c;
        // Minimization form: min ⟨−C, X⟩, dual S = −C − Aᵀy.
        let cm = -c;
        let b = {
            let mut b = DVector::zeros(self.m);
            b[0] = 1.0;
            b
        };
        let lmax = SymmetricEigen::new(c.clone()).eigenvalues.max();
        let mut it = Iterate {
            x: DMatrix::identity(n, n) / n as f64,
            y: {
                let mut y = DVector::zeros(self.m);
                y[0] = -(lmax.abs() + lmax + 1.0);
                y
            },
            s: DMatrix::zeros(n, n),
        };
        it.s = &cm - self.adjoint(&it.y);

        let mut best = it.x.clone();
        let mut best_bound = -it.y[0];
        let mut iterations = 0;
        let mut status = SdpStatus::NotConverged;

        for iter in 0..max_iter {
            iterations = iter;
            let value = c.dot(&it.x);
            let gap = it.x.dot(&it.s);
            let rp = &b - self.op(&it.x);
            let rd = &cm - self.adjoint(&it.y) - &it.s;
            let infeas = rp.amax().max(rd.amax());
            best = it.x.clone();
            best_bound = -it.y[0];
            if gap.abs() <= gap_tol * (1.0 + value.abs()) && infeas <= 1e-10 * (1.0 + c.amax()) {
                status = SdpStatus::Optimal;
                break;
            }

            let Some(s_chol) = it.s.clone().cholesky() else { break };
            let sinv = s_chol.inverse();
            let sinv = (&sinv + sinv.transpose()) * 0.5;
            let schur = self.schur(&it.x, &sinv);
            let Some(schur_chol) = schur.clone().cholesky() else { break };
            let mu = gap / n as f64;

            // Direction for a given Rc·S⁻¹ (the centering target).
            let direction = |rc_sinv: &DMatrix<f64>| {
                let x_rd_sinv = &it.x * &rd * &sinv;
                let rhs = &rp - self.op(rc_sinv) + self.op(&x_rd_sinv);
                let dy = schur_chol.solve(&rhs);
                let ds = &rd - self.adjoint(&dy);
                let dx = rc_sinv - &it.x * &ds * &sinv;
                let dx = (&dx + dx.transpose()) * 0.5;
                (dx, dy, ds)
            };

            let (dxa, _, dsa) = direction(&(-&it.x));
            let ap = max_step(&it.x, &dxa).min(1.0);
            let ad = max_step(&it.s, &dsa).min(1.0);
            let mu_aff = (&it.x + &dxa * ap).dot(&(&it.s + &dsa * ad)) / n as f64;
            let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

            let rc_sinv = &sinv * (sigma * mu) - &it.x - &dxa * &dsa * &sinv;
            let (dx, dy, ds) = direction(&rc_sinv);
            let ap = (0.98 * max_step(&it.x, &dx)).min(1.0);
            let ad = (0.98 * max_step(&it.s, &ds)).min(1.0);
            if !(dx.iter().chain(ds.iter()).all(|v| v.is_finite())) || ap < 1e-12 && ad < 1e-12 {
                break;
            }
            it.x += &dx * ap;
            it.x = (&it.x + it.x.transpose()) * 0.5;
            it.y += &dy * ad;
            it.s += &ds * ad;
            it.s = (&it.s + it.s.transpose()) * 0.5;
        }

        if status == SdpStatus::NotConverged {
            // Stalled or out of iterations: accept the last iterate if it
            // meets the looser acceptance gap.
            let value = c.dot(&it.x);
            let gap = it.x.dot(&it.s);
            let rp = &b - self.op(&it.x);
            let rd = &cm - self.adjoint(&it.y) - &it.s;
            let feasible = rp.amax().max(rd.amax()) <= 1e-8 * (1.0 + c.amax());
            let psd = SymmetricEigen::new(it.x.clone()).eigenvalues.min() >= -1e-10;
            if feasible && psd && gap.abs() <= accept_gap * (1.0 + value.abs()) {
                status = SdpStatus::Optimal;
                best = it.x.clone();
                best_bound = -it.y[0];
            }
        }
        let value = c.dot(&best);
        Ok(SdpSolution {
            status,
            value,
            dual_bound: best_bound,
            x: best,
            iterations,
        })
    }
}

/// Largest `α` with `X + α·D ⪰ 0` (∞ when unconstrained).
fn max_step(x: &DMatrix<f64>, d: &DMatrix<f64>) -> f64 {
    let Some(chol) = x.clone().cholesky() else { return 0.0 };
    let l = chol.l();
    let Some(linv) = l.clone().try_inverse() else { return 0.0 };
    let w = &linv * d * linv.transpose();
    let w = (&w + w.transpose()) * 0.5;
    let lmin = SymmetricEigen::new(w).eigenvalues.min();
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}
