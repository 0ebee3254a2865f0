//! Large-`k` analysis of the Cole–Hopf integral.
//!
//! `roots` locates the critical points of the phase and the fold, `laplace`
//! holds the generic leading-order evaluators, `expansions` assembles the
//! leading-order fields and `predictions` the closed-form scaling constants.

pub mod expansions;
pub mod laplace;
pub mod predictions;
pub mod roots;

pub use expansions::{asymptotic_u, asymptotic_ux, bifurcation_data, AsymptoticField, BifurcationData, SEAM_WEIGHT};
pub use laplace::{laplace_endpoint, laplace_interior, LaplaceValue, Phase};
pub use predictions::{
    check_required_bound, leading_energy, leading_energy_closed_form, leading_enstrophy, predict, shock_enstrophy,
    Predictions, RequiredBound,
};
pub use roots::{
    find_roots, fold_by_coalescence, fold_location, phase_critical_points, phase_value, CriticalKind, CriticalPoint,
    Fold, Regime, RootSet,
};

use crate::quadrature::QuadError;
use crate::rootfind::RootError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AsymptoticsError {
    #[error("a = {a} is outside (0, {a_pitchfork})")]
    OutsidePitchforkRange { a: f64, a_pitchfork: f64 },
    #[error("a must be positive and finite, got {a}")]
    NonPositiveA { a: f64 },
    #[error("x = {x} is outside [0, 1/2]")]
    XOutOfRange { x: f64 },
    #[error("no minimum of the phase found at x = {x}, a = {a}")]
    NoMinimum { x: f64, a: f64 },
    #[error("phase curvature {curvature} at {at} is not positive")]
    NonPositiveCurvature { at: f64, curvature: f64 },
    #[error("phase slope {slope} at {at} is not zero")]
    NotStationary { at: f64, slope: f64 },
    #[error("phase slope {slope} at endpoint {at} is not positive")]
    NonIncreasingPhase { at: f64, slope: f64 },
    #[error("root finding failed: {0}")]
    Root(#[from] RootError),
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] QuadError),
}
