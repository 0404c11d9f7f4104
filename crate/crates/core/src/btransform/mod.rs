//! The transform `(𝔅f)(p) = sup_{q≠0} ⟨p,q⟩ / f(q)` on positive-homogeneous
//! functions, its iterates, and the checks built on them.
//!
//! `𝔅f` is a supremum of linear functions of `p`, so it is always convex
//! and monotone; `𝔅²f ≤ f` with equality exactly on the convex monotone
//! members. It behaves like a multiplicative Legendre–Fenchel transform.

mod checks;
mod handle;
mod kinds;
mod transform;

pub use checks::{
    b_cubed_identity_check, involution_check, norm_fixed_point_check, Classification, FixedPointReport,
    InvolutionReport,
};
pub use handle::{Evaluator, FunctionHandle, AUDIT_POINTS};
pub use kinds::{make_handle, HandleKind, TabulatedFunction, TabulatedSpec};
pub use transform::{bcube, beval, bsquare, transformed_handle, TransformReport};
