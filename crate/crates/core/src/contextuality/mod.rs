//! Probabilistic models on contextuality scenarios (hypergraphs whose
//! edges are complete measurements), their max-relative-entropy distance
//! to the classical and consistent-exclusivity classes, and Bell
//! inequalities read off the classical dual LP.

mod cmax;
mod corpus;
mod model;

pub use cmax::{
    bell_bound, bell_witness, classical_lp, cmax_ce1, cmax_classical, cmax_graph_rhs, contextuality_report,
    BellWitness, ClassicalLp, ContextualityReport, GraphRhs, Residuals, STRONG_DUALITY_TOL,
};
pub use corpus::{corpus, random_model, random_scenario, CorpusEntry};
pub use model::{deterministic_models, deterministic_supports, dmax, ExtReal, ModelClassTag, ProbModel, MODEL_SUM_TOL};
