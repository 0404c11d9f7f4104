use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use gdw_cli::commands::{
    cmd_capacity, cmd_contextuality, cmd_duality, cmd_invariants, cmd_transform, Format, Outcome, RunConfig,
};
use gdw_cli::error::{CliError, Stage, EXIT_STRICT};
use gdw_cli::output::{render_json, render_tsv, to_json};
use gdw_cli::reproduce::CRITERIA;

/// Weighted graph invariants, the duality transform and contextuality LPs.
#[derive(Parser)]
#[command(name = "gdw", version)]
struct Cli {
    /// Relative tolerance: residual threshold for checks and optimizer tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exit with status 4 when a reported check exceeds its tolerance.
    #[arg(long, global = true)]
    strict: bool,
    /// Vertex numbers in input files start at 1.
    #[arg(long, global = true)]
    one_based: bool,
    /// Vertex budget for strong powers (overrides GDW_BUDGET).
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// α, α* and ϑ with certificates.
    Invariants {
        graph: PathBuf,
        /// Inline list (`1,2,1`) or a file; unit weights by default.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Residuals of the three duality identities.
    Duality {
        graph: PathBuf,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Evaluate the transform (or its square or cube) of a function at points.
    Transform {
        /// e.g. `norm-2`, `linear:1,2`, `graph-theta`, `2*norm-inf`, `custom:table.json`.
        function: String,
        points: PathBuf,
        /// Graph file for graph-valued functions.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        iterate: u8,
    },
    /// Distances of a model to the classical and consistent-exclusivity sets.
    Contextuality { scenario: PathBuf, model: PathBuf },
    /// Shannon-capacity bounds from strong powers and the Lovász number.
    Capacity {
        graph: PathBuf,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
    },
    /// Run the acceptance suite and print a pass/fail table.
    ReproducePaper,
}

fn reproduce(rc: &RunConfig) -> Result<Outcome, CliError> {
    let mut rows = Vec::new();
    for c in CRITERIA {
        let start = Instant::now();
        let r = c.run(rc.seed).stage("reproduce")?;
        // Timings go to stderr so the report itself stays reproducible.
        eprintln!(
            "criterion {:>2} {} ({:.1} s)",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        rows.push(r);
    }
    let failed: Vec<u32> = rows.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    Ok(Outcome {
        report: to_json(&json!({"seed": rc.seed, "criteria": rows, "failed": failed})),
        strict_failure: (!failed.is_empty()).then(|| format!("criteria {failed:?} failed")),
    })
}

fn reproduce_tsv(report: &serde_json::Value) -> String {
    let mut out = String::from("id\tstatus\ttitle\n");
    for c in report["criteria"].as_array().into_iter().flatten() {
        let status = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
        out.push_str(&format!("{}\t{status}\t{}\n", c["id"], c["title"].as_str().unwrap_or_default()));
    }
    out
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let rc = RunConfig {
        tol: cli.tol,
        seed: cli.seed,
        strict: cli.strict,
        one_based: cli.one_based,
        budget: cli.budget,
        format: cli.format,
    };
    let is_reproduce = matches!(cli.command, Command::ReproducePaper);
    let outcome = match &cli.command {
        Command::Invariants { graph, weights } => cmd_invariants(graph, weights.as_deref(), &rc)?,
        Command::Duality { graph, weights } => cmd_duality(graph, weights.as_deref(), &rc)?,
        Command::Transform { function, points, graph, iterate } => {
            cmd_transform(function, points, graph.as_deref(), *iterate, &rc)?
        }
        Command::Contextuality { scenario, model } => cmd_contextuality(scenario, model, &rc)?,
        Command::Capacity { graph, weights, kmax } => cmd_capacity(graph, weights.as_deref(), *kmax, &rc)?,
        Command::ReproducePaper => reproduce(&rc)?,
    };
    let text = match rc.format {
        Format::Json => render_json(&outcome.report),
        Format::Tsv if is_reproduce => reproduce_tsv(&outcome.report),
        Format::Tsv => render_tsv(&outcome.report),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io {
            stage: "write report",
            path: path.display().to_string(),
            message: e.to_string(),
        })?,
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
    }
    match outcome.strict_failure {
        Some(msg) if rc.strict => {
            eprintln!("error: strict check failed: {msg}");
            Ok(EXIT_STRICT)
        }
        _ => Ok(0),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
