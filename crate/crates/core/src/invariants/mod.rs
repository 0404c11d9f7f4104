//! Weighted graph invariants: independence number, fractional packing
//! number, Lovász number, and finite-level Shannon capacity bounds.

mod alpha;
mod alpha_star;
mod capacity;
mod theta;
mod weights;

pub use alpha::{alpha, alpha_certificate, IndependentSetCertificate};
pub use alpha_star::{alpha_star, alpha_star_certificate, FractionalPackingCertificate};
pub(crate) use alpha_star::alpha_star_with_cliques;
pub use capacity::{capacity_bounds, capacity_levels, capacity_lower_bound, dual_capacity_bounds, CapacityBounds};
pub use theta::{lovasz_theta, theta_certificate, ThetaCertificate};
pub use weights::{BoundInterval, WeightVector};
