//! Parallel sweeps, a spectral reference solver and the command-line front end
//! built on `enstrophy-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod harness;
pub mod output;
pub mod spectral;
pub mod spectral_oracle;

pub use enstrophy_core;
