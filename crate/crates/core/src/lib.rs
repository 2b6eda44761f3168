//! Exact Lagrange spectrum values for square-tiled surfaces in the 36-element
//! SL(2,Z) orbit of 7-square origamis in H(2).

pub mod cf;
pub mod cli;
pub mod constants;
pub mod error;
pub mod orbit;
pub mod origami;
pub mod spectrum;
pub mod subshift;
pub mod verify;

pub use error::{Error, Result};
