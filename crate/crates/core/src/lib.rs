//! Hazard-free Boolean function analysis.
//!
//! Ternary (Kleene) evaluation, hazard-free extensions and hazard-derivatives,
//! prime implicants and implicates, hazard-free Karchmer–Wigderson matrices with
//! exact protocol search, and hazard-free formula synthesis.

pub mod boolfn;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod formula;
pub mod implicants;
pub mod kw;
pub mod trit;

pub use error::{Error, Result};
