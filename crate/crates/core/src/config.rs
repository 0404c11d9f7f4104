//! Numerical tolerances and solver limits shared by every module.
//!
//! The defaults are the normative values; callers override individual
//! fields rather than scattering literals through the code.

use serde::{Deserialize, Serialize};

/// Default upper bound on the vertex count of a materialized strong power.
pub const DEFAULT_VERTEX_BUDGET: usize = 4096;

/// Default cap on the order of an SDP handed to [`crate::opt::sdp_solve`].
pub const DEFAULT_SDP_ORDER_CAP: usize = 64;

/// Abort deterministic-model enumeration past this many partial assignments.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Tolerances {
    /// Pivot threshold of the tableau simplex.
    pub lp_pivot: f64,
    /// Primal feasibility, scaled by `1 + ‖b‖∞`.
    pub lp_feasibility: f64,
    /// Primal/dual objective agreement, scaled by `1 + |value|`.
    pub lp_duality_gap: f64,
    /// Target duality gap of the SDP interior-point iteration (relative).
    pub sdp_gap: f64,
    /// Relative gap at which a stalled SDP iterate is still accepted.
    pub sdp_accept_gap: f64,
    pub sdp_max_iterations: usize,
    pub sdp_order_cap: usize,
    /// Residual allowed on PSD, trace and zero-pattern checks.
    pub sdp_residual: f64,
    /// Relative tolerance of positive homogeneity in handle audits.
    pub homogeneity: f64,
    pub vertex_budget: usize,
    pub enumeration_limit: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            lp_pivot: 1e-9,
            lp_feasibility: 1e-9,
            lp_duality_gap: 1e-8,
            sdp_gap: 1e-10,
            sdp_accept_gap: 1e-6,
            sdp_max_iterations: 120,
            sdp_order_cap: DEFAULT_SDP_ORDER_CAP,
            sdp_residual: 1e-8,
            homogeneity: 1e-9,
            vertex_budget: DEFAULT_VERTEX_BUDGET,
            enumeration_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

/// Settings of the multi-start maximizer over the probability simplex.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OptimizerConfig {
    /// Relative tolerance on the returned maximum.
    pub tol: f64,
    /// Random Dirichlet(1, …, 1) starting points in addition to the
    /// simplex vertices and the barycenter.
    pub random_starts: usize,
    /// Number of best starting points that receive local refinement.
    pub refine_top: usize,
    /// Evaluation budget of one local refinement.
    pub max_evals_per_start: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            random_starts: 64,
            refine_top: 4,
            max_evals_per_start: 4000,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
