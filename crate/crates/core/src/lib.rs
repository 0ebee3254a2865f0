//! Cole–Hopf evaluation, large-amplitude asymptotics and enstrophy diagnostics
//! for viscous Burgers flow on the unit circle with odd initial data `k f`.
//!
//! The crate is `no_std` with `alloc`; elementary functions come from `libm`.

#![no_std]
#![allow(non_snake_case)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod diagnostics;
pub mod exact_solver;
pub mod fit;
pub mod math;
pub mod profiles;
pub mod quadrature;
pub mod rootfind;
pub mod search;
