//! Quadratic surds and continued fractions.

mod expansion;
mod surd;

pub use expansion::{
    approximants, cf_of_surd, classical_lagrange, convergents, d_value, eval_cf, min_max_tail,
    min_rotation, periodic_value, Approximant, CFExpansion, PeriodTails,
};
pub use surd::QuadraticSurd;
