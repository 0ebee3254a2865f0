//! Pseudospectral reference solver for `u_t + (u²)_x = u_xx` on the unit circle.
//!
//! Diffusion is diagonal in Fourier space and handled exactly (ETDRK4) or by
//! Crank–Nicolson (IMEX-CN-AB2). The flux `u²` is formed in physical space and
//! its transform is truncated to `|m| <= n/3` before differentiation.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use enstrophy_core::exact_solver::{full_grid, StateSnapshot};
use enstrophy_core::profiles::Profile;

use crate::spectral::{apply_derivative, resample_coefficients, tail_fraction, wavenumber, Spectral};

/// Contour points used for the ETDRK4 coefficients.
const CONTOUR_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Etdrk4,
    ImexCnAb2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Initial number of modes (power of two).
    pub n_modes: usize,
    /// Upper limit for automatic doubling.
    pub max_modes: usize,
    pub dt: f64,
    /// Retained fraction of the band for the nonlinear term.
    pub dealias_fraction: f64,
    pub integrator: Integrator,
    /// Test hook: disables the flux term, leaving the heat equation.
    pub advection: bool,
    /// `dt <= cfl / (k n_modes)` is enforced when `k > 0`.
    pub cfl: f64,
    /// Fraction of energy in the top half of the retained band that triggers doubling.
    pub tail_tolerance: f64,
    /// Half-period sample count of the output snapshots.
    pub output_half_grid: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_modes: 512,
            max_modes: 4096,
            dt: 2e-6,
            dealias_fraction: 2.0 / 3.0,
            integrator: Integrator::Etdrk4,
            advection: true,
            cfl: 1.0,
            tail_tolerance: 1e-8,
            output_half_grid: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error("time step {dt} violates dt <= {limit} (cfl {cfl}, k {k}, n {n})")]
    Cfl { dt: f64, limit: f64, cfl: f64, k: f64, n: usize },
    #[error("non-finite state at step {step} (t = {t})")]
    BlowUp { step: usize, t: f64 },
    #[error("save times must be non-negative and sorted")]
    SaveTimes,
}

/// Snapshots at the requested times plus run statistics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<StateSnapshot>,
    pub steps: usize,
    pub final_modes: usize,
    /// Largest spectral tail seen at a save time.
    pub max_tail: f64,
    /// Set when the tail exceeded tolerance at `max_modes`.
    pub resolution_warning: bool,
}

/// Per-step factors of ETDRK4 for one `h`.
struct EtdCoefficients {
    e: Vec<f64>,
    e2: Vec<f64>,
    q: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f3: Vec<f64>,
}

impl EtdCoefficients {
    fn new(lin: &[f64], h: f64) -> Self {
        let m = CONTOUR_POINTS;
        let roots: Vec<Complex64> = (1..=m)
            .map(|j| Complex64::from_polar(1.0, PI * (j as f64 - 0.5) / m as f64))
            .collect();
        let n = lin.len();
        let mut c = Self {
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        for &l in lin {
            let hl = h * l;
            c.e.push(hl.exp());
            c.e2.push((hl / 2.0).exp());
            let (mut q, mut f1, mut f2, mut f3) = (0.0, 0.0, 0.0, 0.0);
            for &r in &roots {
                let z = hl + r;
                let ez = z.exp();
                let z3 = z * z * z;
                q += (((z / 2.0).exp() - 1.0) / z).re;
                f1 += ((-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3).re;
                f2 += ((2.0 + z + ez * (z - 2.0)) / z3).re;
                f3 += ((-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3).re;
            }
            let s = h / m as f64;
            c.q.push(q * s);
            c.f1.push(f1 * s);
            c.f2.push(f2 * s);
            c.f3.push(f3 * s);
        }
        c
    }
}

struct Solver {
    n: usize,
    spectral: Spectral,
    lin: Vec<f64>,
    /// `-2πi m` on retained modes, `0` elsewhere.
    flux: Vec<Complex64>,
    advection: bool,
    etd: HashMap<u64, EtdCoefficients>,
    previous_nonlinear: Option<Vec<Complex64>>,
    scratch: Vec<Complex64>,
}

impl Solver {
    fn new(n: usize, cfg: &OracleConfig) -> Self {
        let cutoff = cfg.dealias_fraction * n as f64 / 2.0;
        let lin = (0..n).map(|j| -(TAU * wavenumber(j, n)).powi(2)).collect();
        let flux = (0..n)
            .map(|j| {
                let m = wavenumber(j, n);
                if m.abs() <= cutoff && !(j == n / 2) {
                    Complex64::new(0.0, -TAU * m)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self {
            n,
            spectral: Spectral::new(n),
            lin,
            flux,
            advection: cfg.advection,
            etd: HashMap::new(),
            previous_nonlinear: None,
            scratch: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// `-(u²)_x` in Fourier space.
    fn nonlinear(&mut self, v: &[Complex64]) -> Vec<Complex64> {
        if !self.advection {
            return vec![Complex64::new(0.0, 0.0); self.n];
        }
        self.scratch.copy_from_slice(v);
        self.spectral.inverse_complex(&mut self.scratch);
        for z in self.scratch.iter_mut() {
            *z = Complex64::new(z.re * z.re, 0.0);
        }
        self.spectral.forward_complex(&mut self.scratch);
        self.scratch.iter().zip(&self.flux).map(|(w, f)| w * f).collect()
    }

    fn etdrk4_step(&mut self, v: &mut [Complex64], h: f64) {
        let key = h.to_bits();
        if !self.etd.contains_key(&key) {
            let c = EtdCoefficients::new(&self.lin, h);
            self.etd.insert(key, c);
        }
        let nv = self.nonlinear(v);
        let c = &self.etd[&key];
        let a: Vec<Complex64> = (0..self.n).map(|j| c.e2[j] * v[j] + c.q[j] * nv[j]).collect();
        let na = self.nonlinear(&a);
        let c = &self.etd[&key];
        let b: Vec<Complex64> = (0..self.n).map(|j| c.e2[j] * v[j] + c.q[j] * na[j]).collect();
        let nb = self.nonlinear(&b);
        let c = &self.etd[&key];
        let cc: Vec<Complex64> = (0..self.n)
            .map(|j| c.e2[j] * a[j] + c.q[j] * (2.0 * nb[j] - nv[j]))
            .collect();
        let nc = self.nonlinear(&cc);
        let c = &self.etd[&key];
        for j in 0..self.n {
            v[j] = c.e[j] * v[j] + c.f1[j] * nv[j] + 2.0 * c.f2[j] * (na[j] + nb[j]) + c.f3[j] * nc[j];
        }
    }

    fn imex_step(&mut self, v: &mut [Complex64], h: f64) {
        let nv = self.nonlinear(v);
        let explicit: Vec<Complex64> = match &self.previous_nonlinear {
            Some(prev) => nv.iter().zip(prev).map(|(a, b)| 1.5 * a - 0.5 * b).collect(),
            None => nv.clone(),
        };
        for j in 0..self.n {
            let l = self.lin[j];
            v[j] = ((1.0 + 0.5 * h * l) * v[j] + h * explicit[j]) / (1.0 - 0.5 * h * l);
        }
        self.previous_nonlinear = Some(nv);
    }

    fn step(&mut self, v: &mut [Complex64], h: f64, integrator: Integrator) {
        match integrator {
            Integrator::Etdrk4 => self.etdrk4_step(v, h),
            Integrator::ImexCnAb2 => self.imex_step(v, h),
        }
    }
}

fn validate(cfg: &OracleConfig, k: f64) -> Result<(), OracleError> {
    if !cfg.n_modes.is_power_of_two() || cfg.n_modes < 16 {
        return Err(OracleError::InvalidConfig(format!("n_modes {} is not a power of two >= 16", cfg.n_modes)));
    }
    if cfg.max_modes < cfg.n_modes || !cfg.max_modes.is_power_of_two() {
        return Err(OracleError::InvalidConfig(format!("max_modes {} is below n_modes or not a power of two", cfg.max_modes)));
    }
    if !(cfg.dt > 0.0) || !(cfg.dealias_fraction > 0.0 && cfg.dealias_fraction <= 1.0) {
        return Err(OracleError::InvalidConfig("dt must be positive and dealias_fraction in (0, 1]".into()));
    }
    if cfg.output_half_grid < 8 || !cfg.output_half_grid.is_power_of_two() {
        return Err(OracleError::InvalidConfig(format!(
            "output_half_grid {} is not a power of two >= 8",
            cfg.output_half_grid
        )));
    }
    if k > 0.0 && cfg.advection {
        let limit = cfg.cfl / (k * cfg.n_modes as f64);
        if cfg.dt > limit {
            return Err(OracleError::Cfl {
                dt: cfg.dt,
                limit,
                cfl: cfg.cfl,
                k,
                n: cfg.n_modes,
            });
        }
    }
    Ok(())
}

/// Integrates from `u0 = k f` and returns snapshots at `save_times`.
pub fn integrate(p: &Profile, k: f64, t_end: f64, save_times: &[f64], cfg: &OracleConfig) -> Result<Trajectory, OracleError> {
    integrate_from(|x| k * p.f(x), k, t_end, save_times, cfg)
}

/// Integrates from an arbitrary periodic `u0`; `k` only labels the snapshots
/// and sets the CFL limit.
pub fn integrate_from<F: Fn(f64) -> f64>(
    u0: F,
    k: f64,
    t_end: f64,
    save_times: &[f64],
    cfg: &OracleConfig,
) -> Result<Trajectory, OracleError> {
    validate(cfg, k)?;
    if save_times.iter().any(|&t| !(t >= 0.0) || t > t_end) || save_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(OracleError::SaveTimes);
    }

    let mut n = cfg.n_modes;
    let mut solver = Solver::new(n, cfg);
    let samples: Vec<f64> = full_grid(n / 2).iter().map(|&x| u0(x)).collect();
    let mut v = solver.spectral.forward(&samples);

    let mut t = 0.0;
    let mut steps = 0;
    let mut snapshots = Vec::with_capacity(save_times.len());
    let mut max_tail: f64 = 0.0;
    let mut resolution_warning = false;

    for &target in save_times {
        let span = target - t;
        if span > 0.0 {
            let count = (span / cfg.dt).ceil().max(1.0) as usize;
            let h = span / count as f64;
            for i in 0..count {
                solver.step(&mut v, h, cfg.integrator);
                steps += 1;
                if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(OracleError::BlowUp { step: steps, t: t + (i + 1) as f64 * h });
                }
                // watch the top half of the retained band and refine when it fills
                if steps % 16 == 0 || i + 1 == count {
                    let retained = (cfg.dealias_fraction * n as f64 / 2.0) as usize;
                    let tail = tail_fraction(&v, retained / 2);
                    if tail > cfg.tail_tolerance {
                        if 2 * n <= cfg.max_modes {
                            let prev = solver.previous_nonlinear.take();
                            v = resample_coefficients(&v, 2 * n);
                            n *= 2;
                            solver = Solver::new(n, cfg);
                            solver.previous_nonlinear = prev.map(|p| resample_coefficients(&p, n));
                        } else {
                            resolution_warning = true;
                        }
                    }
                }
            }
            t = target;
        }
        let retained = (cfg.dealias_fraction * n as f64 / 2.0) as usize;
        max_tail = max_tail.max(tail_fraction(&v, retained / 2));
        snapshots.push(to_snapshot(&v, k, t, cfg.output_half_grid));
    }

    Ok(Trajectory {
        snapshots,
        steps,
        final_modes: n,
        max_tail,
        resolution_warning,
    })
}

fn to_snapshot(v: &[Complex64], k: f64, t: f64, half_grid: usize) -> StateSnapshot {
    let m = 2 * half_grid;
    let c = resample_coefficients(v, m);
    let spectral = Spectral::new(m);
    let u = spectral.inverse(&c);
    let mut d = c.clone();
    apply_derivative(&mut d, 1);
    let ux = spectral.inverse(&d);
    let a = if t > 0.0 && k > 0.0 { 1.0 / (2.0 * k * t) } else { f64::INFINITY };
    StateSnapshot::from_fields(k, t, a, full_grid(half_grid), u, ux)
}
