//! Function specifications for the `transform` command.
//!
//! ```text
//! [c*]norm-<r>          r a positive number or `inf`
//! [c*]linear:a1,a2,…    [c*]max-linear:a1,a2,…
//! [c*]graph-alpha       [c*]graph-alpha-star     [c*]graph-theta
//! [c*]capacity-level-<k>
//! [c*]custom:<path>     tabulated values on a simplex grid (JSON)
//! ```

use std::path::Path;

use crate::error::{CliError, Stage};
use crate::input::{parse_numbers, read, read_graph};
use gdw_core::btransform::{make_handle, FunctionHandle, HandleKind, TabulatedFunction, TabulatedSpec};
use gdw_core::config::Tolerances;
use gdw_core::graph::Graph;
use gdw_core::Error as CoreError;

const STAGE: &str = "parse function";

fn bad(message: impl Into<String>) -> CliError {
    CliError::usage(STAGE, message)
}

/// Parses `spec` for points of dimension `n`. Graph functions need `graph`.
pub fn parse_fn_spec(
    spec: &str,
    n: usize,
    graph: Option<&Path>,
    one_based: bool,
    tol: &Tolerances,
) -> Result<FunctionHandle, CliError> {
    let (scale, body) = match spec.split_once('*') {
        Some((c, rest)) => {
            let c: f64 = c.trim().parse().map_err(|_| bad(format!("bad scale '{c}'")))?;
            (Some(c), rest.trim())
        }
        None => (None, spec.trim()),
    };
    let load = || -> Result<Graph, CliError> {
        let path = graph.ok_or_else(|| bad(format!("'{body}' needs --graph")))?;
        let g = read_graph(path, one_based)?;
        if g.n() != n {
            return Err(bad(format!("graph has {} vertices, points have {n} coordinates", g.n())));
        }
        Ok(g)
    };
    let coefficients = |list: &str| -> Result<Vec<f64>, CliError> {
        let a = parse_numbers(list).stage(STAGE)?;
        if a.len() != n {
            return Err(bad(format!("{} coefficients for points of dimension {n}", a.len())));
        }
        Ok(a)
    };
    let kind = if let Some(r) = body.strip_prefix("norm-") {
        let r = if r == "inf" { f64::INFINITY } else { r.parse().map_err(|_| bad(format!("bad exponent '{r}'")))? };
        HandleKind::NormP { n, r }
    } else if let Some(list) = body.strip_prefix("linear:") {
        HandleKind::Linear { a: coefficients(list)? }
    } else if let Some(list) = body.strip_prefix("max-linear:") {
        HandleKind::MaxLinear { a: coefficients(list)? }
    } else if body == "graph-alpha" {
        HandleKind::GraphAlpha(load()?)
    } else if body == "graph-alpha-star" {
        HandleKind::GraphAlphaStar(load()?)
    } else if body == "graph-theta" {
        HandleKind::GraphTheta(load()?)
    } else if let Some(k) = body.strip_prefix("capacity-level-") {
        let k = k.parse().map_err(|_| bad(format!("bad level '{k}'")))?;
        HandleKind::CapacityLevel { graph: load()?, k }
    } else if let Some(path) = body.strip_prefix("custom:") {
        let text = read(Path::new(path), STAGE)?;
        let spec: TabulatedSpec = serde_json::from_str(&text)
            .map_err(|e| CoreError::Parse { line: e.line(), message: e.to_string() })
            .stage(STAGE)?;
        if spec.n != n {
            return Err(bad(format!("table has dimension {}, points have {n}", spec.n)));
        }
        HandleKind::Custom(TabulatedFunction::from_spec(spec, tol).stage("audit function")?)
    } else {
        return Err(bad(format!("unknown function '{body}'")));
    };
    let h = make_handle(kind, tol).stage("audit function")?;
    match scale {
        Some(c) => h.scaled(c).stage(STAGE),
        None => Ok(h),
    }
}
