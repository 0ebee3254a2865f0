//! Enstrophy-maximum search, amplitude sweeps and scaling fits.

use std::sync::Once;

use rayon::prelude::*;

use enstrophy_core::asymptotics::{predict, AsymptoticsError, Predictions};
use enstrophy_core::diagnostics::{half_grid_energy_enstrophy, integral_bound_rhs};
use enstrophy_core::exact_solver::{a_from_t, eval_fields, half_grid, SolverConfig, SolverError};
use enstrophy_core::fit::{power_law_fit, FitError};
use enstrophy_core::profiles::Profile;
use enstrophy_core::search::golden_section_max;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "ENSTROPHY_LAB_THREADS";
/// Points of the logarithmic coarse scan.
pub const SCAN_POINTS: usize = 24;
/// Relative time tolerance of the golden-section refinement.
pub const TIME_TOLERANCE: f64 = 1e-4;
/// Deviation of a prediction ratio from 1 beyond which the smallest `k` is transient.
pub const TRANSIENT_DEVIATION: f64 = 0.3;
pub const MIN_FIT_POINTS: usize = 4;
pub const DEFAULT_K_LIST: [f64; 4] = [20.0, 40.0, 80.0, 160.0];

/// Applies `ENSTROPHY_LAB_THREADS` to the global pool once per process.
pub fn configure_threads() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| {
        if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
            if n > 0 {
                // a pool built earlier by the host keeps its size
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    });
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error("profile violates |f'(0)| > |f(x*)|/x*: {a_pitchfork} <= {a_star}")]
    PitchforkAfterMaximum { a_pitchfork: f64, a_star: f64 },
    #[error("enstrophy maximum not bracketed at k = {k}; scan (t, E): {scan:?}")]
    Bracket { k: f64, scan: Vec<(f64, f64)> },
    #[error("fit failed: {0}")]
    Fit(#[from] FitError),
    #[error("sweep needs at least {MIN_FIT_POINTS} amplitudes, got {0}")]
    TooFewAmplitudes(usize),
}

/// `K` and `E` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPoint {
    pub t: f64,
    pub energy: f64,
    pub enstrophy: f64,
}

/// `K(t)`, `E(t)` of the exact solution from the half grid, parallel over `x`.
pub fn energy_at(p: &Profile, k: f64, t: f64, cfg: &SolverConfig) -> Result<EnergyPoint, SolverError> {
    let (u, ux) = par_half_grid_fields(p, a_from_t(k, t), k, cfg)?;
    let (energy, enstrophy) = half_grid_energy_enstrophy(&u, &ux);
    Ok(EnergyPoint { t, energy, enstrophy })
}

/// `(u, u_x)` on the half grid `[0, 1/2]`.
pub fn par_half_grid_fields(p: &Profile, a: f64, k: f64, cfg: &SolverConfig) -> Result<(Vec<f64>, Vec<f64>), SolverError> {
    configure_threads();
    let pairs: Vec<(f64, f64)> = half_grid(cfg.grid_size)
        .par_iter()
        .map(|&x| eval_fields(p, x, a, k, cfg))
        .collect::<Result<_, _>>()?;
    Ok(pairs.into_iter().unzip())
}

/// Exact snapshot on the full grid, parallel over `x`.
pub fn par_snapshot(
    p: &Profile,
    t: f64,
    k: f64,
    cfg: &SolverConfig,
) -> Result<enstrophy_core::exact_solver::StateSnapshot, SolverError> {
    use enstrophy_core::exact_solver::{full_grid, StateSnapshot};
    cfg.validate()?;
    if t == 0.0 {
        return Ok(StateSnapshot::initial(p, k, cfg.grid_size));
    }
    configure_threads();
    let a = a_from_t(k, t);
    let xs = full_grid(cfg.grid_size);
    let pairs: Vec<(f64, f64)> = xs
        .par_iter()
        .map(|&x| eval_fields(p, x, a, k, cfg))
        .collect::<Result<_, _>>()?;
    let (u, ux) = pairs.into_iter().unzip();
    Ok(StateSnapshot::from_fields(k, t, a, xs, u, ux))
}

/// Measured enstrophy maximum at one amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxSearchResult {
    pub k: f64,
    pub t_star_measured: f64,
    pub e_max_measured: f64,
    pub k_at_max: f64,
    pub k_drop_measured: f64,
    /// `K(u0)` and `E(u0)` on the solver grid.
    pub k_initial: f64,
    pub e_initial: f64,
    pub t_upper: f64,
    pub n_evaluations: usize,
    /// Coarse scan, ascending in `t`.
    pub scan: Vec<EnergyPoint>,
    pub predictions: Predictions,
}

/// Coarse log scan of `E(t)` on `[t0/4, 8 T*_pred]`, then golden section in `ln t`.
pub fn find_enstrophy_max(p: &Profile, k: f64, cfg: &SolverConfig) -> Result<MaxSearchResult, HarnessError> {
    cfg.validate()?;
    let a_pf = -p.f_prime_at_zero();
    let a_star = p.max_abs_f() / p.x_star();
    if !(a_pf > a_star) {
        return Err(HarnessError::PitchforkAfterMaximum { a_pitchfork: a_pf, a_star });
    }
    let pred = predict(p, k)?;
    let (t_lo, t_hi) = (pred.t0 / 4.0, 8.0 * pred.t_star);
    let (l_lo, l_hi) = (t_lo.ln(), t_hi.ln());
    let times: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| (l_lo + (l_hi - l_lo) * i as f64 / (SCAN_POINTS - 1) as f64).exp())
        .collect();
    let scan: Vec<EnergyPoint> = times
        .iter()
        .map(|&t| energy_at(p, k, t, cfg))
        .collect::<Result<_, _>>()?;

    let best = scan
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.enstrophy.total_cmp(&b.enstrophy))
        .map(|(i, _)| i)
        .unwrap();
    if best == 0 || best + 1 == scan.len() {
        return Err(HarnessError::Bracket {
            k,
            scan: scan.iter().map(|e| (e.t, e.enstrophy)).collect(),
        });
    }

    let mut evaluations = scan.len();
    let golden = golden_section_max(
        |lt: f64| -> Result<f64, SolverError> {
            evaluations += 1;
            Ok(energy_at(p, k, lt.exp(), cfg)?.enstrophy)
        },
        scan[best - 1].t.ln(),
        scan[best + 1].t.ln(),
        TIME_TOLERANCE,
    )?;
    let t_star = golden.x.exp();
    let at_max = energy_at(p, k, t_star, cfg)?;
    evaluations += 1;

    let initial = initial_energy(p, k, cfg.grid_size);
    Ok(MaxSearchResult {
        k,
        t_star_measured: t_star,
        e_max_measured: at_max.enstrophy,
        k_at_max: at_max.energy,
        k_drop_measured: initial.energy - at_max.energy,
        k_initial: initial.energy,
        e_initial: initial.enstrophy,
        t_upper: t_hi,
        n_evaluations: evaluations,
        scan,
        predictions: pred,
    })
}

/// `K(k f)` and `E(k f)` on the half grid.
pub fn initial_energy(p: &Profile, k: f64, n_half: usize) -> EnergyPoint {
    let xs = half_grid(n_half);
    let u: Vec<f64> = xs.iter().map(|&x| k * p.f(x)).collect();
    let ux: Vec<f64> = xs.iter().map(|&x| k * p.f_prime(x)).collect();
    let (energy, enstrophy) = half_grid_energy_enstrophy(&u, &ux);
    EnergyPoint {
        t: 0.0,
        energy,
        enstrophy,
    }
}

/// Log-log least-squares fit of one measured quantity against `E(u0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub quantity: &'static str,
    pub exponent: f64,
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub k_list: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub results: Vec<MaxSearchResult>,
    /// `T*`, `E_max`, `K_drop` against `E0`.
    pub fits: [ScalingFit; 3],
    /// Set when the smallest `k` deviates from its prediction by more than 30%.
    pub transient_guard_tripped: bool,
    /// The amplitude dropped from the fits, if the guard was applied.
    pub excluded_k: Option<f64>,
}

/// Whether the prediction ratios of `r` stray beyond [`TRANSIENT_DEVIATION`].
pub fn is_transient(r: &MaxSearchResult) -> bool {
    let c = ratios(r);
    [c.t_star, c.e_max, c.k_drop]
        .iter()
        .any(|&x| (x - 1.0).abs() > TRANSIENT_DEVIATION)
}

/// Runs [`find_enstrophy_max`] for every amplitude concurrently and fits the scalings.
pub fn sweep(p: &Profile, k_list: &[f64], cfg: &SolverConfig) -> Result<SweepResult, HarnessError> {
    if k_list.len() < MIN_FIT_POINTS {
        return Err(HarnessError::TooFewAmplitudes(k_list.len()));
    }
    configure_threads();
    let mut ks = k_list.to_vec();
    ks.sort_by(f64::total_cmp);
    let results: Vec<MaxSearchResult> = ks
        .par_iter()
        .map(|&k| find_enstrophy_max(p, k, cfg))
        .collect::<Result<_, _>>()?;

    let tripped = is_transient(&results[0]);
    // dropping a point is only allowed when enough remain for a fit
    let skip = usize::from(tripped && results.len() > MIN_FIT_POINTS);
    let used = &results[skip..];
    let fits = fit_all(used)?;
    Ok(SweepResult {
        fits,
        transient_guard_tripped: tripped,
        excluded_k: (skip == 1).then(|| results[0].k),
        results,
    })
}

fn fit_all(used: &[MaxSearchResult]) -> Result<[ScalingFit; 3], HarnessError> {
    let e0: Vec<f64> = used.iter().map(|r| r.e_initial).collect();
    let k_list: Vec<f64> = used.iter().map(|r| r.k).collect();
    let one = |quantity: &'static str, ys: Vec<f64>| -> Result<ScalingFit, HarnessError> {
        let f = power_law_fit(&e0, &ys, MIN_FIT_POINTS)?;
        Ok(ScalingFit {
            quantity,
            exponent: f.exponent,
            log_prefactor: f.log_prefactor,
            r_squared: f.r_squared,
            k_list: k_list.clone(),
        })
    };
    Ok([
        one("T_star", used.iter().map(|r| r.t_star_measured).collect())?,
        one("E_max", used.iter().map(|r| r.e_max_measured).collect())?,
        one("K_drop", used.iter().map(|r| r.k_drop_measured).collect())?,
    ])
}

/// Measured over predicted values at one amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratios {
    pub k: f64,
    pub t_star: f64,
    pub e_max: f64,
    pub k_drop: f64,
    /// `E_max` over `(2/3) k³ |f(x*)|³`.
    pub e_max_shock: f64,
}

pub fn ratios(r: &MaxSearchResult) -> Ratios {
    let p = &r.predictions;
    Ratios {
        k: r.k,
        t_star: r.t_star_measured / p.t_star,
        e_max: r.e_max_measured / p.e_at_max_leading,
        k_drop: r.k_drop_measured / p.k_drop_leading,
        e_max_shock: r.e_max_measured / p.e_at_max_shock_integral,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<Ratios>,
    /// Richardson limit `k → ∞` from the two largest amplitudes, assuming a `1/k` correction.
    pub extrapolated: Option<Ratios>,
}

/// Per-`k` prediction ratios and their extrapolated limits.
pub fn compare_predictions(results: &[MaxSearchResult]) -> ComparisonReport {
    let mut rows: Vec<Ratios> = results.iter().map(ratios).collect();
    rows.sort_by(|a, b| a.k.total_cmp(&b.k));
    let extrapolated = (rows.len() >= 2).then(|| {
        let (r1, r2) = (rows[rows.len() - 2], rows[rows.len() - 1]);
        let lim = |a: f64, b: f64| (r2.k * b - r1.k * a) / (r2.k - r1.k);
        Ratios {
            k: f64::INFINITY,
            t_star: lim(r1.t_star, r2.t_star),
            e_max: lim(r1.e_max, r2.e_max),
            k_drop: lim(r1.k_drop, r2.k_drop),
            e_max_shock: lim(r1.e_max_shock, r2.e_max_shock),
        }
    });
    ComparisonReport { rows, extrapolated }
}

/// `E_max / (E0^{1/3} + E0/(16π²))³` at one amplitude.
pub fn non_sharpness_ratio(r: &MaxSearchResult) -> f64 {
    r.e_max_measured / integral_bound_rhs(r.e_initial)
}
