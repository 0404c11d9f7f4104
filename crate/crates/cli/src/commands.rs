//! The report-producing commands. Each returns a JSON value; the caller
//! renders it and maps errors and strict failures to exit codes.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Stage};
use crate::fnspec::parse_fn_spec;
use crate::input::{read_graph, read_model, read_points, read_scenario, weights};
use crate::output::to_json;
use gdw_core::btransform::{bcube, beval, bsquare, make_handle, FunctionHandle, HandleKind, TransformReport};
use gdw_core::config::{OptimizerConfig, Tolerances, DEFAULT_VERTEX_BUDGET};
use gdw_core::contextuality::contextuality_report;
use gdw_core::invariants::{
    alpha_certificate, alpha_star_certificate, capacity_bounds, dual_capacity_bounds, theta_certificate,
};

/// Relative residual accepted by the duality identities unless `--tol` is given.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-2;

/// The optimizer tolerance is clamped to this range: tighter values only
/// burn the evaluation budget.
const OPTIMIZER_TOL_RANGE: (f64, f64) = (1e-6, 1e-1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub tol: Option<f64>,
    pub seed: u64,
    pub strict: bool,
    pub one_based: bool,
    pub budget: Option<usize>,
    pub format: Format,
}

impl RunConfig {
    /// Vertex budget: `--budget`, then `GDW_BUDGET`, then the default.
    pub fn vertex_budget(&self) -> Result<usize, CliError> {
        if let Some(b) = self.budget {
            return Ok(b);
        }
        match std::env::var("GDW_BUDGET") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::usage("configuration", format!("GDW_BUDGET='{v}' is not a vertex count"))),
            Err(_) => Ok(DEFAULT_VERTEX_BUDGET),
        }
    }

    pub fn tolerances(&self) -> Result<Tolerances, CliError> {
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::usage("configuration", format!("--tol must be positive, got {t}")));
            }
        }
        Ok(Tolerances { vertex_budget: self.vertex_budget()?, ..Tolerances::default() })
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        let base = OptimizerConfig::default().with_seed(self.seed);
        match self.tol {
            Some(t) => {
                let tol = t.clamp(OPTIMIZER_TOL_RANGE.0, OPTIMIZER_TOL_RANGE.1);
                base.with_tol(tol)
            }
            None => base,
        }
    }

    pub fn residual_tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_RESIDUAL_TOL)
    }
}

/// A report plus an optional strict-mode complaint.
pub struct Outcome {
    pub report: Value,
    pub strict_failure: Option<String>,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, strict_failure: None }
    }
}

pub fn cmd_invariants(graph: &Path, w: Option<&str>, rc: &RunConfig) -> Result<Outcome, CliError> {
    let tol = rc.tolerances()?;
    let g = read_graph(graph, rc.one_based)?;
    let p = weights(w, g.n())?;
    let a = alpha_certificate(&g, &p).stage("solve alpha")?;
    let s = alpha_star_certificate(&g, &p, &tol).stage("solve alpha_star")?;
    let t = theta_certificate(&g, &p, &tol).stage("solve theta")?;
    Ok(Outcome::ok(to_json(&json!({
        "alpha": a.value,
        "alpha_star": s.value,
        "theta": t.value,
        "certificates": {"alpha": a, "alpha_star": s, "theta": t},
    }))))
}

#[derive(Serialize)]
struct Identity {
    identity: &'static str,
    lhs: f64,
    rhs: f64,
    residual: f64,
}

pub fn cmd_duality(graph: &Path, w: Option<&str>, rc: &RunConfig) -> Result<Outcome, CliError> {
    let tol = rc.tolerances()?;
    let cfg = rc.optimizer();
    let g = read_graph(graph, rc.one_based)?;
    let p = weights(w, g.n())?;
    let gc = g.complement();
    let lhs = [
        alpha_certificate(&g, &p).stage("solve alpha")?.value,
        alpha_star_certificate(&g, &p, &tol).stage("solve alpha_star")?.value,
        theta_certificate(&g, &p, &tol).stage("solve theta")?.value,
    ];
    let kinds = [
        ("alpha = B alpha_star(complement)", HandleKind::GraphAlphaStar(gc.clone())),
        ("alpha_star = B alpha(complement)", HandleKind::GraphAlpha(gc.clone())),
        ("theta = B theta(complement)", HandleKind::GraphTheta(gc)),
    ];
    let mut identities = Vec::new();
    for (lhs, (identity, kind)) in lhs.into_iter().zip(kinds) {
        let h = make_handle(kind, &tol).stage("audit function")?;
        let rhs = beval(&h, p.as_slice(), &cfg).stage("transform")?.value;
        let residual = if lhs == 0.0 { rhs.abs() } else { (lhs - rhs).abs() / lhs.abs() };
        identities.push(Identity { identity, lhs, rhs, residual });
    }
    let max_residual = identities.iter().map(|i| i.residual).fold(0.0, f64::max);
    let limit = rc.residual_tol();
    let within = max_residual <= limit;
    Ok(Outcome {
        report: to_json(&json!({
            "identities": identities,
            "max_residual": max_residual,
            "tol": limit,
            "within_tol": within,
        })),
        strict_failure: (!within).then(|| format!("max residual {max_residual:.3e} exceeds {limit:.1e}")),
    })
}

pub fn cmd_transform(
    spec: &str,
    points: &Path,
    graph: Option<&Path>,
    iterate: u8,
    rc: &RunConfig,
) -> Result<Outcome, CliError> {
    let tol = rc.tolerances()?;
    let cfg = rc.optimizer();
    let pts = read_points(points)?;
    let f = parse_fn_spec(spec, pts[0].len(), graph, rc.one_based, &tol)?;
    let eval: fn(&FunctionHandle, &[f64], &OptimizerConfig) -> gdw_core::Result<TransformReport> = match iterate {
        1 => beval,
        2 => bsquare,
        3 => bcube,
        k => return Err(CliError::usage("configuration", format!("--iterate must be 1, 2 or 3, got {k}"))),
    };
    let reports: Vec<TransformReport> =
        pts.iter().map(|p| eval(&f, p, &cfg)).collect::<Result<_, _>>().stage("transform")?;
    Ok(Outcome::ok(to_json(&json!({
        "function": f.name(),
        "iterate": iterate,
        "points": reports,
    }))))
}

pub fn cmd_contextuality(scenario: &Path, model: &Path, rc: &RunConfig) -> Result<Outcome, CliError> {
    let tol = rc.tolerances()?;
    let h = read_scenario(scenario, rc.one_based)?;
    let p = read_model(model, &h)?;
    let r = contextuality_report(&h, &p, &tol).stage("solve contextuality LPs")?;
    Ok(Outcome::ok(to_json(&r)))
}

pub fn cmd_capacity(graph: &Path, w: Option<&str>, kmax: usize, rc: &RunConfig) -> Result<Outcome, CliError> {
    let tol = rc.tolerances()?;
    let g = read_graph(graph, rc.one_based)?;
    let p = weights(w, g.n())?;
    let b = capacity_bounds(&g, &p, kmax, &tol).stage("capacity bounds")?;
    let dual = dual_capacity_bounds(&g, &p, kmax, &tol, &rc.optimizer()).stage("dual capacity bounds")?;
    Ok(Outcome::ok(to_json(&json!({
        "levels": b.levels,
        "lower": b.interval.lower,
        "upper": b.interval.upper,
        "dual_interval": dual,
    }))))
}
