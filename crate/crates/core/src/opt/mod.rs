//! Self-contained optimization kernels: a dense LP simplex, a small dense
//! SDP interior-point method, and a multi-start maximizer over the
//! probability simplex.

mod lp;

pub use lp::{lp_solve, LpProblem, LpResiduals, LpSolution, LpStatus, Relation, Sense};
mod sdp;

pub use sdp::{sdp_solve, SdpProblem, SdpResiduals, SdpSolution, SdpStatus};
mod simplex_max;

pub use simplex_max::{project_to_simplex, simplex_maximize, starting_points, MaximizerDiagnostics, SimplexMaximum};
pub(crate) use simplex_max::dirichlet_uniform;
