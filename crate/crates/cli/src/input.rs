//! File and argument parsing shared by the commands.

use std::path::Path;

use serde::Deserialize;

use crate::error::{CliError, Stage};
use gdw_core::contextuality::ProbModel;
use gdw_core::graph::{parse_graph, Graph, Hypergraph};
use gdw_core::invariants::WeightVector;
use gdw_core::Error as CoreError;

pub fn read(path: &Path, stage: &'static str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        stage,
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_graph(path: &Path, one_based: bool) -> Result<Graph, CliError> {
    parse_graph(&read(path, "parse graph")?, one_based).stage("parse graph")
}

fn json_err(e: serde_json::Error) -> CoreError {
    CoreError::Parse { line: e.line(), message: e.to_string() }
}

/// Numbers separated by commas and/or whitespace, or a JSON array.
pub fn parse_numbers(text: &str) -> Result<Vec<f64>, CoreError> {
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(json_err);
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
            out.push(tok.parse().map_err(|_| CoreError::Parse {
                line: i + 1,
                message: format!("'{tok}' is not a number"),
            })?);
        }
    }
    Ok(out)
}

/// `--weights`: an inline list (`1,2,1`), a file holding one, or unit
/// weights when absent.
pub fn weights(arg: Option<&str>, n: usize) -> Result<WeightVector, CliError> {
    let Some(arg) = arg else { return Ok(WeightVector::ones(n)) };
    let text = if Path::new(arg).is_file() { read(Path::new(arg), "parse weights")? } else { arg.to_string() };
    let w = WeightVector::new(parse_numbers(&text).stage("parse weights")?).stage("parse weights")?;
    if w.len() != n {
        return Err(CliError::usage(
            "parse weights",
            format!("{} weights given for a graph on {n} vertices", w.len()),
        ));
    }
    Ok(w)
}

/// Points: a JSON array of arrays, or one whitespace/comma separated point per line.
pub fn read_points(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = read(path, "parse points")?;
    let points: Vec<Vec<f64>> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text.trim()).map_err(json_err).stage("parse points")?
    } else {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(i, l)| {
                parse_numbers(l).map_err(|e| match e {
                    CoreError::Parse { message, .. } => CoreError::Parse { line: i + 1, message },
                    other => other,
                })
            })
            .collect::<Result<_, _>>()
            .stage("parse points")?
    };
    let Some(n) = points.first().map(Vec::len) else {
        return Err(CliError::usage("parse points", "no points given"));
    };
    if let Some(i) = points.iter().position(|p| p.len() != n) {
        return Err(CliError::usage("parse points", format!("point {i} has {} coordinates, expected {n}", points[i].len())));
    }
    Ok(points)
}

#[derive(Deserialize)]
struct ScenarioJson {
    n: usize,
    edges: Vec<Vec<usize>>,
}

pub fn read_scenario(path: &Path, one_based: bool) -> Result<Hypergraph, CliError> {
    let raw: ScenarioJson = serde_json::from_str(&read(path, "parse scenario")?)
        .map_err(json_err)
        .stage("parse scenario")?;
    let edges = if one_based {
        raw.edges
            .into_iter()
            .map(|e| e.into_iter().map(|v| v.checked_sub(1)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| CliError::usage("parse scenario", "vertex 0 in a one-based scenario"))?
    } else {
        raw.edges
    };
    Hypergraph::new(raw.n, edges).stage("parse scenario")
}

pub fn read_model(path: &Path, h: &Hypergraph) -> Result<ProbModel, CliError> {
    let p = parse_numbers(&read(path, "parse model")?).stage("parse model")?;
    ProbModel::new(h, p).stage("validate model")
}
