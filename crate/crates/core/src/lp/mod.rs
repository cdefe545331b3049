//! Fractional packings and the LP that computes ν*_ℱ(G).

mod packing;
pub mod simplex;

pub use packing::{
    labeled_normalize, packing_weight, restrict_packing, snap_feasible, solve_fractional_packing, verify_fractional,
    Arithmetic, FractionalPacking, FractionalVerdict, LpResult,
};
