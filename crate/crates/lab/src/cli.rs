//! Orchestration of the four run modes.

use std::path::PathBuf;

use serde_json::{json, Map, Value};

use enstrophy_core::asymptotics::{bifurcation_data, check_required_bound, fold_by_coalescence, fold_location, predict, AsymptoticField};
use enstrophy_core::diagnostics::integral_bound_rhs;
use enstrophy_core::exact_solver::{a_from_t, half_grid, phase_moments};
use enstrophy_core::profiles::{validate_profile, Profile, DEFAULT_VALIDATION_POINTS};

use crate::config::{Cli, Mode, RunConfig};
use crate::diagnostics::compute;
use crate::harness::{compare_predictions, non_sharpness_ratio, par_snapshot, ratios, sweep};
use crate::output::{write_csv, write_json};
use crate::spectral_oracle::{integrate, OracleConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            _ => EXIT_NUMERICAL,
        }
    }

    /// One-line JSON report for stderr.
    pub fn report(&self) -> String {
        let kind = match self {
            RunError::Config(_) => "config",
            RunError::Numerical(_) => "numerical",
            RunError::Io(_) => "io",
            RunError::Validation(_) => "validation",
        };
        json!({ "error": kind, "message": self.to_string(), "exit_code": self.exit_code() }).to_string()
    }
}

fn numerical<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Numerical(e.to_string())
}

fn io<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Io(e.to_string())
}

/// Files written by a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub mode: Mode,
    pub files: Vec<PathBuf>,
}

/// Parses flags, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                eprintln!("{}", RunError::Config(e.to_string()).report());
                return EXIT_CONFIG;
            }
            print!("{e}");
            return EXIT_OK;
        }
    };
    let outcome = RunConfig::resolve(&cli).map_err(RunError::Config).and_then(|rc| run(&rc));
    match outcome {
        Ok(summary) => {
            for f in &summary.files {
                println!("{}", f.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("{}", e.report());
            e.exit_code()
        }
    }
}

pub fn run(rc: &RunConfig) -> Result<RunSummary, RunError> {
    let profile = rc.profile.build().map_err(RunError::Config)?;
    std::fs::create_dir_all(&rc.out_dir).map_err(io)?;
    let files = match rc.mode {
        Mode::Solve => run_solve(rc, &profile)?,
        Mode::Asym => run_asym(rc, &profile)?,
        Mode::Sweep => run_sweep(rc, &profile)?,
        Mode::Validate => run_validate(rc, &profile)?,
    };
    Ok(RunSummary { mode: rc.mode, files })
}

fn base_metadata(rc: &RunConfig, profile: &Profile) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("mode".into(), json!(rc.mode.name()));
    m.insert("profile".into(), json!(rc.profile.label()));
    m.insert("x_star".into(), json!(profile.x_star()));
    m.insert(
        "solver".into(),
        json!({
            "quad_tolerance": rc.solver.quad_tolerance,
            "grid_size": rc.solver.grid_size,
            "domain_halfwidth": rc.solver.domain_halfwidth,
            "max_panels": rc.solver.max_panels,
        }),
    );
    m
}

fn provenance(pairs: &[(&str, &str)]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert((*k).into(), json!(v));
    }
    Value::Object(m)
}

fn run_solve(rc: &RunConfig, p: &Profile) -> Result<Vec<PathBuf>, RunError> {
    let k = rc.k;
    let pred = predict(p, k).map_err(numerical)?;
    let times = if rc.times.is_empty() {
        vec![pred.t0 / 2.0, 2.0 * pred.t0, pred.t_star]
    } else {
        rc.times.clone()
    };
    let mut sorted = times.clone();
    sorted.sort_by(f64::total_cmp);
    let oracle = if rc.oracle {
        let cfg = OracleConfig {
            output_half_grid: rc.solver.grid_size,
            ..OracleConfig::default()
        };
        let t_end = *sorted.last().unwrap_or(&0.0);
        Some(integrate(p, k, t_end, &sorted, &cfg).map_err(numerical)?)
    } else {
        None
    };

    let mut files = Vec::new();
    let mut rows = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        let snap = par_snapshot(p, t, k, &rc.solver).map_err(numerical)?;
        let c = compute(&snap, true);
        let d = c.diagnostics;
        let path = rc.out_dir.join(format!("snapshot_{i:03}.csv"));
        let table: Vec<Vec<f64>> = (0..snap.x_grid.len())
            .map(|j| vec![snap.x_grid[j], snap.u_values[j], snap.ux_values[j]])
            .collect();
        write_csv(&path, &["x", "u", "u_x"], &table).map_err(io)?;
        files.push(path);
        let mut row = vec![
            t,
            snap.a,
            d.energy,
            d.enstrophy,
            d.rate.unwrap_or(f64::NAN),
            d.bound_r_residual.unwrap_or(f64::NAN),
            d.poincare_residual,
            snap.oddness_residual,
            c.tail_fraction,
        ];
        if let Some(tr) = &oracle {
            let idx = sorted.iter().position(|&s| s == t).unwrap();
            let o = &tr.snapshots[idx];
            let diff = o
                .u_values
                .iter()
                .zip(&snap.u_values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            row.push(diff);
        }
        rows.push(row);
    }
    let mut header = vec![
        "t",
        "a",
        "K",
        "E",
        "R",
        "bound_R_residual",
        "poincare_residual",
        "oddness_residual",
        "tail_fraction",
    ];
    if oracle.is_some() {
        header.push("oracle_sup_diff");
    }
    let diag = rc.out_dir.join("solve_diagnostics.csv");
    write_csv(&diag, &header, &rows).map_err(io)?;
    files.push(diag);

    let mut meta = base_metadata(rc, p);
    meta.insert("k".into(), json!(k));
    meta.insert("times".into(), json!(times));
    meta.insert(
        "provenance".into(),
        provenance(&[
            ("snapshot_*.csv", "exact_solver::snapshot"),
            ("solve_diagnostics.csv:K,E,R,bound_R_residual,poincare_residual,tail_fraction", "diagnostics::compute"),
            ("solve_diagnostics.csv:oddness_residual", "exact_solver::snapshot"),
            ("solve_diagnostics.csv:oracle_sup_diff", "spectral_oracle::integrate"),
            ("times", "asymptotics::predict"),
        ]),
    );
    let summary = rc.out_dir.join("solve_summary.json");
    write_json(&summary, &Value::Object(meta)).map_err(io)?;
    files.push(summary);
    Ok(files)
}

fn run_asym(rc: &RunConfig, p: &Profile) -> Result<Vec<PathBuf>, RunError> {
    let k = rc.k;
    let pred = predict(p, k).map_err(numerical)?;
    let a_pf = -p.f_prime_at_zero();
    let a_star = p.max_abs_f() / p.x_star();
    let a_values = [2.0 * a_pf, a_star];
    let xs = half_grid(rc.solver.grid_size.min(256));

    let mut rows = Vec::new();
    let mut bif = Vec::new();
    for &a in &a_values {
        let field = AsymptoticField::new(p, a, k).map_err(numerical)?;
        let b = bifurcation_data(p, a, k).map_err(numerical)?;
        bif.push(json!({ "a": a, "t": 1.0 / (2.0 * k * a), "x0": b.x0, "x1": b.x1 }));
        for &x in &xs {
            let pm = phase_moments(p, x, a, k, &rc.solver).map_err(numerical)?;
            rows.push(vec![
                a,
                x,
                pm.u(),
                field.u(x).map_err(numerical)?,
                pm.ux(),
                field.ux(x).map_err(numerical)?,
            ]);
        }
    }
    let mut files = Vec::new();
    let csv = rc.out_dir.join("asym_error.csv");
    write_csv(&csv, &["a", "x", "u_exact", "u_asym", "ux_exact", "ux_asym"], &rows).map_err(io)?;
    files.push(csv);

    let mut meta = base_metadata(rc, p);
    meta.insert("k".into(), json!(k));
    meta.insert(
        "predictions".into(),
        json!({
            "T_star": pred.t_star,
            "E_at_max_leading": pred.e_at_max_leading,
            "E_at_max_shock_integral": pred.e_at_max_shock_integral,
            "K_drop_leading": pred.k_drop_leading,
            "K_at_max_leading": pred.k_at_max_leading,
            "K_initial_leading": pred.k_initial_leading,
            "t0": pred.t0,
            "a_pitchfork": a_pf,
            "a_star": a_star,
        }),
    );
    meta.insert("bifurcation".into(), Value::Array(bif));
    meta.insert(
        "provenance".into(),
        provenance(&[
            ("predictions", "asymptotics::predict"),
            ("bifurcation", "asymptotics::bifurcation_data"),
            ("asym_error.csv:u_exact,ux_exact", "exact_solver::eval_u,eval_ux"),
            ("asym_error.csv:u_asym,ux_asym", "asymptotics::asymptotic_u,asymptotic_ux"),
        ]),
    );
    let json_path = rc.out_dir.join("predictions.json");
    write_json(&json_path, &Value::Object(meta)).map_err(io)?;
    files.push(json_path);
    Ok(files)
}

/// Columns of `sweep.csv`.
pub const SWEEP_COLUMNS: [&str; 9] = [
    "k",
    "E0",
    "T_star",
    "E_max",
    "K_drop",
    "ratio_T_star",
    "ratio_E_max",
    "ratio_K_drop",
    "ratio_E_max_shock",
];

fn run_sweep(rc: &RunConfig, p: &Profile) -> Result<Vec<PathBuf>, RunError> {
    let res = sweep(p, &rc.k_list, &rc.solver).map_err(numerical)?;
    let rows: Vec<Vec<f64>> = res
        .results
        .iter()
        .map(|r| {
            let q = ratios(r);
            vec![
                r.k,
                r.e_initial,
                r.t_star_measured,
                r.e_max_measured,
                r.k_drop_measured,
                q.t_star,
                q.e_max,
                q.k_drop,
                q.e_max_shock,
            ]
        })
        .collect();
    let mut files = Vec::new();
    let csv = rc.out_dir.join("sweep.csv");
    write_csv(&csv, &SWEEP_COLUMNS, &rows).map_err(io)?;
    files.push(csv);

    let fits: Vec<Value> = res
        .fits
        .iter()
        .map(|f| {
            json!({
                "quantity": f.quantity,
                "exponent": f.exponent,
                "log_prefactor": f.log_prefactor,
                "r_squared": f.r_squared,
                "k_list": f.k_list,
            })
        })
        .collect();
    let cmp = compare_predictions(&res.results);
    let extrapolated = cmp.extrapolated.map(|e| {
        json!({ "T_star": e.t_star, "E_max": e.e_max, "K_drop": e.k_drop, "E_max_shock": e.e_max_shock })
    });
    let non_sharp: Vec<Value> = res
        .results
        .iter()
        .map(|r| json!({ "k": r.k, "E0": r.e_initial, "bound_rhs": integral_bound_rhs(r.e_initial), "ratio": non_sharpness_ratio(r) }))
        .collect();
    let mut meta = base_metadata(rc, p);
    meta.insert("k_list".into(), json!(rc.k_list));
    meta.insert("fits".into(), Value::Array(fits));
    meta.insert("extrapolated_ratios".into(), extrapolated.unwrap_or(Value::Null));
    meta.insert(
        "transient_guard".into(),
        json!({ "tripped": res.transient_guard_tripped, "excluded_k": res.excluded_k }),
    );
    meta.insert("non_sharpness".into(), Value::Array(non_sharp));
    meta.insert(
        "provenance".into(),
        provenance(&[
            ("sweep.csv:T_star,E_max,K_drop", "harness::find_enstrophy_max"),
            ("sweep.csv:E0", "harness::find_enstrophy_max"),
            ("sweep.csv:ratio_*", "harness::compare_predictions"),
            ("fits", "harness::sweep"),
            ("extrapolated_ratios", "harness::compare_predictions"),
            ("non_sharpness.bound_rhs", "diagnostics::integral_bound_rhs"),
        ]),
    );
    let json_path = rc.out_dir.join("sweep_fits.json");
    write_json(&json_path, &Value::Object(meta)).map_err(io)?;
    files.push(json_path);
    Ok(files)
}

fn run_validate(rc: &RunConfig, p: &Profile) -> Result<Vec<PathBuf>, RunError> {
    let mut checks: Vec<(String, bool, f64)> = Vec::new();

    let report = validate_profile(p, DEFAULT_VALIDATION_POINTS);
    checks.push(("profile_admissible".into(), report.is_admissible(), report.violations().len() as f64));

    let rb = check_required_bound(p, 400).map_err(numerical)?;
    checks.push(("required_bound".into(), rb.holds(), rb.fd_residual));

    let a_pf = -p.f_prime_at_zero();
    let a = 0.5 * a_pf;
    let fold = fold_location(p, a).map_err(numerical)?;
    let detected = fold_by_coalescence(p, a).map_err(numerical)?;
    let gap = (fold.x0 - detected).abs();
    checks.push(("fold_matches_coalescence".into(), gap < 1e-8, gap));

    let k = rc.k;
    let pred = predict(p, k).map_err(numerical)?;
    checks.push(("predictions_positive".into(), pred.t_star > 0.0 && pred.k_drop_leading > 0.0, pred.k_drop_leading));

    let init = compute(&par_snapshot(p, 0.0, k, &rc.solver).map_err(numerical)?, true).diagnostics;
    checks.push(("poincare_initial".into(), init.poincare_holds(), init.poincare_residual));

    let snap = par_snapshot(p, pred.t0 / 2.0, k, &rc.solver).map_err(numerical)?;
    let c = compute(&snap, true).diagnostics;
    let scale = k * p.max_abs_f();
    checks.push(("oddness".into(), snap.oddness_residual < 1e-9 * scale.max(1.0), snap.oddness_residual));
    checks.push(("rate_bound".into(), c.rate_bound_holds().unwrap_or(false), c.bound_r_residual.unwrap_or(f64::NAN)));
    checks.push(("poincare".into(), c.poincare_holds(), c.poincare_residual));
    let _ = a_from_t(k, pred.t0);

    let all = checks.iter().all(|c| c.1);
    let list: Vec<Value> = checks
        .iter()
        .map(|(n, ok, v)| json!({ "check": n, "passed": ok, "value": v }))
        .collect();
    let mut meta = base_metadata(rc, p);
    meta.insert("k".into(), json!(k));
    meta.insert("all_passed".into(), json!(all));
    meta.insert("checks".into(), Value::Array(list));
    meta.insert(
        "provenance".into(),
        provenance(&[
            ("profile_admissible", "profiles::validate_profile"),
            ("required_bound", "asymptotics::check_required_bound"),
            ("fold_matches_coalescence", "asymptotics::fold_location"),
            ("predictions_positive", "asymptotics::predict"),
            ("poincare_initial,poincare,rate_bound", "diagnostics::compute"),
            ("oddness", "exact_solver::snapshot"),
        ]),
    );
    let path = rc.out_dir.join("validate.json");
    write_json(&path, &Value::Object(meta)).map_err(io)?;
    if !all {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
        return Err(RunError::Validation(failed.join(", ")));
    }
    Ok(vec![path])
}
