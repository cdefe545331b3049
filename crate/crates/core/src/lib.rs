pub mod copies;
pub mod error;
pub mod exact;
pub mod family;
pub mod graph;
pub mod harness;
pub mod hypergraph;
pub mod lp;
pub mod partition;
pub mod pipeline;
mod ratio;
pub mod regularity;
pub mod seed;

pub use error::{Error, Result};

/// Exact rational scalar used for packing weights and densities.
pub type Rational = num_rational::BigRational;
