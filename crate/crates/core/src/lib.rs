pub mod btransform;
pub mod config;
pub mod contextuality;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod opt;

pub use error::{Error, Result};
