//! Weighted Lovász number through its semidefinite form
//!
//! ```text
//! ϑ_G(p) = max Σ_{u,v} √(p_u p_v) X_uv   s.t.  X ⪰ 0, tr X = 1, X_uv = 0 (u ∼ v)
//! ```
//!
//! which agrees with the orthonormal-representation maximum over
//! representations of the complement. Weights are normalized to sum one
//! before solving, which keeps the value exactly homogeneous.

use nalgebra::DMatrix;
use serde::Serialize;

use super::WeightVector;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::opt::{sdp_solve, SdpProblem, SdpStatus};

#[derive(Debug, Clone, Serialize)]
pub struct ThetaCertificate {
    pub value: f64,
    /// Dual objective, an upper bound on the value.
    pub dual_bound: f64,
    /// Optimal PSD matrix, rows first.
    pub x: Vec<Vec<f64>>,
}

pub fn lovasz_theta(g: &Graph, p: &WeightVector, tol: &Tolerances) -> Result<f64> {
    Ok(theta_certificate(g, p, tol)?.value)
}

pub fn theta_certificate(g: &Graph, p: &WeightVector, tol: &Tolerances) -> Result<ThetaCertificate> {
    let n = g.n();
    p.check_len(n)?;
    let s = p.sum();
    if s == 0.0 {
        let x = DMatrix::<f64>::identity(n, n) / n as f64;
        return Ok(ThetaCertificate {
            value: 0.0,
            dual_bound: 0.0,
            x: rows(&x),
        });
    }
    // Zero-weight vertices do not change the value and only make the SDP
    // degenerate, so solve on the support and pad the certificate.
    let support: Vec<usize> = (0..n).filter(|&v| p.as_slice()[v] > 0.0).collect();
    let k = support.len();
    let r: Vec<f64> = support.iter().map(|&v| (p.as_slice()[v] / s).sqrt()).collect();
    let c = DMatrix::from_fn(k, k, |i, j| r[i] * r[j]);
    let mut zeros = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if g.is_adjacent(support[i], support[j]) {
                zeros.push((i, j));
            }
        }
    }
    let problem = SdpProblem::new(c, zeros)?;
    let sol = sdp_solve(&problem, tol)?;
    if sol.status != SdpStatus::Optimal {
        return Err(Error::Solver(format!(
            "theta SDP did not converge after {} iterations (value {:.9}, bound {:.9})",
            sol.iterations, sol.value, sol.dual_bound
        )));
    }
    let mut x = DMatrix::zeros(n, n);
    for (i, &u) in support.iter().enumerate() {
        for (j, &v) in support.iter().enumerate() {
            x[(u, v)] = sol.x[(i, j)];
        }
    }
    Ok(ThetaCertificate {
        value: s * sol.value,
        dual_bound: s * sol.dual_bound,
        x: rows(&x),
    })
}

fn rows(x: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..x.nrows()).map(|i| x.row(i).iter().copied().collect()).collect()
}
