//! Time-loop drivers: single runs with snapshots and monitors, refinement
//! sweeps with rate fits, and the monitor suite asserting the scheme's
//! structural properties.

use crate::config::{ExperimentSpec, ModelKind, SchemeKind};
use crate::presets::{build_setup, RunState, Setup};
use noflow::baselines::{baseline_select_dt, baseline_step, BaselineKind};
use noflow::grid::{Boundary, CellField, Grid};
use noflow::metrics::{
    field_from_exact, fit_rate, kruzhkov_residual, l1_error, restrict_fine, tv_eps, w1_error,
    ErrorRow, ErrorTable,
};
use noflow::models::{FluxModel, KkRadial};
use noflow::scheme::{
    self, auto_k, noflow_slopes, nsle_step_with_slopes, select_dt, semidiscrete_rhs, split_flux,
    SchemeConfig, StepReport,
};
use noflow::models::{kk_radial_slopes, kk_step_with_slopes};
use noflow::{DerivBounds, SolverError};
use std::time::Instant;

#[derive(Debug)]
pub enum RunError {
    Config(String),
    Solver(SolverError),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            RunError::Solver(e) => write!(f, "solver error: {e}"),
        }
    }
}

impl From<SolverError> for RunError {
    fn from(e: SolverError) -> Self {
        RunError::Solver(e)
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;

#[derive(Debug, Clone, Copy)]
pub struct MonitorRow {
    pub step: u64,
    pub t: f64,
    pub dt: f64,
    pub mass: f64,
    pub tv: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub entropy_residual: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    /// One value vector per component, aligned with `component_names`.
    pub fields: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub grid: Grid,
    pub component_names: Vec<&'static str>,
    pub snapshots: Vec<Snapshot>,
    pub monitors: Vec<MonitorRow>,
    pub metadata: Vec<(String, String)>,
}

impl RunArtifacts {
    /// Final values of one component.
    pub fn final_component(&self, index: usize) -> CellField {
        let snap = self.snapshots.last().expect("at least one snapshot");
        CellField::new(self.grid, snap.fields[index].clone())
    }
}

fn snapshot_of(state: &RunState, t: f64) -> Snapshot {
    let fields = match state {
        RunState::Scalar { u, .. } => vec![u.values().to_vec()],
        RunState::Kk(s) => {
            vec![s.r.values().to_vec(), s.u1.values().to_vec(), s.u2.values().to_vec()]
        }
    };
    Snapshot { t, fields }
}

/// Clip a proposed dt so the step lands exactly on the target time when
/// it would reach or overshoot it.
fn clip_dt(dt_full: f64, t: f64, t_target: f64) -> (f64, bool) {
    let remaining = t_target - t;
    if dt_full >= remaining * (1.0 - 1e-12) {
        (remaining, true)
    } else {
        (dt_full, false)
    }
}

struct Stepper<'a> {
    spec: &'a ExperimentSpec,
    cfg: SchemeConfig,
    k: f64,
    bounds: DerivBounds,
    baseline_dt: f64,
    h: f64,
}

impl<'a> Stepper<'a> {
    fn new(spec: &'a ExperimentSpec, setup: &Setup) -> Self {
        let mut cfg = spec.scheme_config();
        cfg.k_shift = spec.k_mode.unwrap_or(setup.default_k);
        // Freeze the shift and the derivative bounds against the initial
        // data for the whole run.
        let (k, bounds, lo, hi) = match &setup.state {
            RunState::Scalar { u, model } => (
                cfg.resolve_k(model.as_ref(), u),
                model.derivative_bounds(u.min(), u.max()),
                u.min(),
                u.max(),
            ),
            RunState::Kk(s) => (
                cfg.resolve_k(&KkRadial, &s.r),
                KkRadial.derivative_bounds(s.r.min(), s.r.max()),
                s.r.min(),
                s.r.max(),
            ),
        };
        let baseline_dt = match &setup.state {
            RunState::Scalar { model, .. } if spec.scheme.is_baseline() => {
                baseline_select_dt(model.as_ref(), lo, hi, setup.grid.h())
            }
            _ => 0.0,
        };
        Stepper { spec, cfg, k, bounds, baseline_dt, h: setup.grid.h() }
    }

    /// Advance the state by one step of at most `dt cap = t_target - t`,
    /// returning the report and whether the step landed on the target.
    fn advance(
        &self,
        state: &mut RunState,
        t: f64,
        t_target: f64,
    ) -> Result<(StepReport, bool), SolverError> {
        match state {
            RunState::Scalar { u, model } => {
                if self.spec.scheme == SchemeKind::Nsle {
                    model.pre_step(u, t);
                    let f = noflow_slopes(u, model.as_ref(), self.cfg.limiter, t)?;
                    let dt_full = select_dt(&f, self.h, &self.cfg, self.k, Some(&self.bounds));
                    let (dt, landed) = clip_dt(dt_full, t, t_target);
                    let (next, report) = nsle_step_with_slopes(u, &f, self.k, dt)?;
                    *u = next;
                    Ok((report, landed))
                } else {
                    let kind = match self.spec.scheme {
                        SchemeKind::Godunov => BaselineKind::Godunov,
                        SchemeKind::Rusanov => BaselineKind::Rusanov,
                        SchemeKind::LaxFriedrichs => BaselineKind::LaxFriedrichs,
                        SchemeKind::Nsle => unreachable!(),
                    };
                    let (dt, landed) = clip_dt(self.baseline_dt, t, t_target);
                    let next = baseline_step(u, model.as_ref(), kind, t, dt)?;
                    *u = next;
                    let report = StepReport::from_field(u, dt, self.h);
                    Ok((report, landed))
                }
            }
            RunState::Kk(s) => {
                let f = kk_radial_slopes(s, &self.cfg)?;
                let dt_full = select_dt(&f, self.h, &self.cfg, self.k, Some(&self.bounds));
                let (dt, landed) = clip_dt(dt_full, t, t_target);
                let (next, report) = kk_step_with_slopes(s, &f, self.k, dt)?;
                *s = next;
                Ok((report, landed))
            }
        }
    }
}

/// Execute a single experiment: march to each snapshot time (the last
/// step before a snapshot is clipped to land on it exactly), recording
/// per-step monitors.
pub fn run(spec: &ExperimentSpec) -> RunResult<RunArtifacts> {
    spec.validate().map_err(RunError::Config)?;
    let wall = Instant::now();
    let mut setup = build_setup(spec).map_err(RunError::Config)?;
    let stepper = Stepper::new(spec, &setup);
    let mut monitors = Vec::new();
    let mut snapshots = Vec::new();
    let mut t = 0.0;
    let mut step: u64 = 0;
    for t_snap in spec.snapshot_times() {
        let tiny = 1e-12 * t_snap.max(1.0);
        while t < t_snap - tiny {
            let (report, landed) = stepper.advance(&mut setup.state, t, t_snap)?;
            t = if landed { t_snap } else { t + report.dt_used };
            step += 1;
            monitors.push(MonitorRow {
                step,
                t,
                dt: report.dt_used,
                mass: report.mass,
                tv: report.tv_eps,
                u_min: report.u_min,
                u_max: report.u_max,
                entropy_residual: report.max_entropy_residual,
            });
        }
        snapshots.push(snapshot_of(&setup.state, t_snap));
    }
    let mut metadata = spec.describe();
    metadata.push(("k_resolved".into(), format!("{}", stepper.k)));
    metadata.push(("steps".into(), step.to_string()));
    metadata.push(("version".into(), env!("CARGO_PKG_VERSION").into()));
    metadata.push(("wall_time_s".into(), format!("{:.3}", wall.elapsed().as_secs_f64())));
    Ok(RunArtifacts {
        grid: setup.grid,
        component_names: setup.component_names,
        snapshots,
        monitors,
        metadata,
    })
}

fn thread_budget(jobs: usize) -> usize {
    let available =
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(jobs.max(1));
    match std::env::var("NOFLOW_THREADS") {
        Ok(v) => v.parse::<usize>().ok().filter(|&n| n > 0).map_or(available, |n| n.min(available)),
        Err(_) => available,
    }
}

/// Run `spec` at each resolution and measure errors against the exact
/// solution (when the model has one) or against a block-averaged finer
/// self-reference. W1 errors accompany L1 whenever an exact solution is
/// available. Runs execute in parallel across resolutions; each run is
/// single-threaded, so its output is independent of the thread budget.
pub fn sweep(
    spec: &ExperimentSpec,
    cell_counts: &[usize],
    reference_cells: Option<usize>,
) -> RunResult<ErrorTable> {
    if cell_counts.is_empty() {
        return Err(RunError::Config("sweep needs at least one resolution".into()));
    }
    let probe = build_setup(spec).map_err(RunError::Config)?;
    let has_exact = probe.exact.is_some();
    if !has_exact && reference_cells.is_none() {
        return Err(RunError::Config(
            "this model has no exact solution; pass a reference resolution".into(),
        ));
    }
    let mut jobs: Vec<usize> = cell_counts.to_vec();
    if !has_exact {
        let rc = reference_cells.unwrap();
        for &n in cell_counts {
            if !rc.is_multiple_of(n) || rc == n {
                return Err(RunError::Config(format!(
                    "reference resolution {rc} is not an integer refinement of {n}"
                )));
            }
        }
        jobs.push(rc);
    }

    // Parallel over resolutions, deterministic per run.
    let budget = thread_budget(jobs.len());
    let mut results: Vec<Option<RunResult<RunArtifacts>>> = Vec::new();
    results.resize_with(jobs.len(), || None);
    for batch in (0..jobs.len()).collect::<Vec<_>>().chunks(budget) {
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for &i in batch {
                let mut s = spec.clone();
                s.n_cells = jobs[i];
                handles.push((i, scope.spawn(move || run(&s))));
            }
            for (i, h) in handles {
                results[i] = Some(h.join().expect("worker panicked"));
            }
        });
    }
    let mut artifacts: Vec<RunArtifacts> = Vec::with_capacity(jobs.len());
    for r in results {
        artifacts.push(r.unwrap()?);
    }

    let reference = if has_exact { None } else { artifacts.pop() };
    let comp = probe.error_component;
    let mut rows = Vec::new();
    for art in &artifacts {
        let u = art.final_component(comp);
        let (l1, w1) = if let Some(exact) = &probe.exact {
            let reference = field_from_exact(art.grid, exact.as_ref(), spec.t_final);
            (l1_error(&u, &reference)?, Some(w1_error(&u, &reference)?))
        } else {
            let fine = reference.as_ref().unwrap().final_component(comp);
            let coarse_ref = restrict_fine(&fine, &art.grid)?;
            (l1_error(&u, &coarse_ref)?, None)
        };
        rows.push(ErrorRow { n_cells: art.grid.n_cells(), h: art.grid.h(), l1, w1 });
    }
    Ok(ErrorTable::from_rows(rows)?)
}

/// One pass/fail line of the monitor suite.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub name: String,
    pub observed: String,
    pub limit: String,
    pub pass: bool,
}

impl CheckRow {
    fn new(name: &str, observed: f64, limit: f64, pass: bool) -> Self {
        CheckRow {
            name: name.into(),
            observed: format!("{observed:.6e}"),
            limit: format!("{limit:.6e}"),
            pass,
        }
    }
}

#[derive(Debug)]
pub struct MonitorSuiteReport {
    pub checks: Vec<CheckRow>,
    pub artifacts: Option<RunArtifacts>,
    pub passed: bool,
}

/// Run the experiment with conservation accounting, then assert the
/// scheme's structural properties on the same initial data: conservation
/// identities on the full scheme, and the total-variation / range /
/// entropy guarantees on the forward-Euler semidiscrete form they are
/// stated for (auto k-shift, TVNI timestep).
pub fn monitor_suite(spec: &ExperimentSpec) -> RunResult<MonitorSuiteReport> {
    spec.validate().map_err(RunError::Config)?;
    let mut checks = Vec::new();

    // -- conservation accounting on the requested run --
    let artifacts = match conservation_checks(spec, &mut checks) {
        Ok(art) => {
            if matches!(spec.model, ModelKind::LwrBackward | ModelKind::LwrForward) {
                density_range_check(&art, &mut checks);
            }
            Some(art)
        }
        Err(RunError::Solver(e)) => {
            checks.push(CheckRow {
                name: "solver".into(),
                observed: e.to_string(),
                limit: "completes without error".into(),
                pass: false,
            });
            None
        }
        Err(e) => return Err(e),
    };

    // -- semidiscrete-form property suite --
    if spec.scheme == SchemeKind::Nsle {
        ode_property_checks(spec, &mut checks)?;
        structural_checks(spec, &mut checks)?;
    }

    let passed = checks.iter().all(|c| c.pass);
    Ok(MonitorSuiteReport { checks, artifacts, passed })
}

/// Instrumented version of [`run`] that tracks the exact discrete mass
/// balance, including the boundary fluxes on non-periodic grids.
///
/// On a periodic grid the mass is conserved identically. With constant
/// extension, one step of the projection scheme satisfies
/// `mass' = mass + dt (Ubar_0 f_{1/2} - Ubar_{n-1} f_{n+1/2})` exactly
/// (the k-shift cancels); the baselines satisfy the flux-difference
/// analogue with `F = H(u)` at the boundary edges.
fn conservation_checks(
    spec: &ExperimentSpec,
    checks: &mut Vec<CheckRow>,
) -> RunResult<RunArtifacts> {
    let mut setup = build_setup(spec).map_err(RunError::Config)?;
    let stepper = Stepper::new(spec, &setup);
    let periodic = setup.grid.boundary() == Boundary::Periodic;
    let h = setup.grid.h();
    let n_cells = setup.grid.n_cells();

    let mass_of = |state: &RunState| -> Vec<f64> {
        match state {
            RunState::Scalar { u, .. } => vec![u.mass()],
            RunState::Kk(s) => vec![s.r.mass(), s.u1.mass(), s.u2.mass()],
        }
    };
    let mass0 = mass_of(&setup.state);
    let scale = mass0.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let nonneg = match &setup.state {
        RunState::Scalar { u, .. } => u.min() >= 0.0,
        RunState::Kk(_) => false,
    };

    let mut t = 0.0;
    let mut step = 0u64;
    let mut monitors = Vec::new();
    let mut snapshots = Vec::new();
    let mut worst_step_defect = 0.0f64;
    let mut boundary_flux_total = 0.0;
    let mut worst_l1_growth = f64::NEG_INFINITY;
    let l1_0 = mass0[0]; // nonnegative data only, where this check applies
    for t_snap in spec.snapshot_times() {
        let tiny = 1e-12 * t_snap.max(1.0);
        while t < t_snap - tiny {
            let before = mass_of(&setup.state);
            // Exact boundary import of the coming step (non-periodic).
            let influx = if periodic {
                None
            } else {
                match (&mut setup.state, spec.scheme) {
                    (RunState::Scalar { u, model }, SchemeKind::Nsle) => {
                        model.pre_step(u, t);
                        let f = noflow_slopes(u, model.as_ref(), stepper.cfg.limiter, t)?;
                        let dt_full =
                            select_dt(&f, h, &stepper.cfg, stepper.k, Some(&stepper.bounds));
                        let (dt, _) = clip_dt(dt_full, t, t_snap);
                        let m = u.len();
                        let ubar_first = u.values()[0] * h / (h + (f[1] - f[0]) * dt);
                        let ubar_last =
                            u.values()[m - 1] * h / (h + (f[m] - f[m - 1]) * dt);
                        Some(dt * (ubar_first * f[0] - ubar_last * f[m]))
                    }
                    (RunState::Scalar { u, model }, _) => {
                        // Equal ghost states make every baseline boundary
                        // flux collapse to H(u).
                        let (dt, _) = clip_dt(stepper.baseline_dt, t, t_snap);
                        let m = u.len();
                        let f_left =
                            model.flux(u.values()[0], setup.grid.edge(0), t);
                        let f_right =
                            model.flux(u.values()[m - 1], setup.grid.edge(m), t);
                        Some(dt * (f_left - f_right))
                    }
                    (RunState::Kk(_), _) => None,
                }
            };
            let (report, landed) = stepper.advance(&mut setup.state, t, t_snap)?;
            let dt = report.dt_used;
            let after = mass_of(&setup.state);
            let defect = match influx {
                Some(io) => (after[0] - before[0] - io).abs(),
                None => (0..before.len())
                    .map(|i| (after[i] - before[i]).abs())
                    .fold(0.0, f64::max),
            };
            worst_step_defect = worst_step_defect.max(defect);
            boundary_flux_total += influx.unwrap_or(0.0);
            if nonneg && periodic {
                worst_l1_growth = worst_l1_growth.max(after[0] - l1_0);
            }
            t = if landed { t_snap } else { t + dt };
            step += 1;
            monitors.push(MonitorRow {
                step,
                t,
                dt,
                mass: report.mass,
                tv: report.tv_eps,
                u_min: report.u_min,
                u_max: report.u_max,
                entropy_residual: None,
            });
        }
        snapshots.push(snapshot_of(&setup.state, t_snap));
    }

    let step_limit = 10.0 * f64::EPSILON * n_cells as f64 * scale;
    checks.push(CheckRow::new(
        "conservation_per_step",
        worst_step_defect,
        step_limit,
        worst_step_defect <= step_limit,
    ));
    let mass_end = mass_of(&setup.state);
    if periodic {
        for (i, name) in setup.component_names.iter().enumerate() {
            let drift = (mass_end[i] - mass0[i]).abs();
            let limit = 1e-10 * mass0[i].abs().max(1.0);
            checks.push(CheckRow::new(
                &format!("conservation_total_{name}"),
                drift,
                limit,
                drift <= limit,
            ));
        }
        if nonneg && worst_l1_growth > f64::NEG_INFINITY {
            let limit = 1e-10 * l1_0.max(1.0);
            checks.push(CheckRow::new(
                "l1_stability",
                worst_l1_growth.max(0.0),
                limit,
                worst_l1_growth <= limit,
            ));
        }
    } else {
        let drift = (mass_end[0] - mass0[0] - boundary_flux_total).abs();
        let limit = 1e-10 * scale.max(boundary_flux_total.abs());
        checks.push(CheckRow::new("conservation_vs_boundary_flux", drift, limit, drift <= limit));
    }

    let mut metadata = spec.describe();
    metadata.push(("k_resolved".into(), format!("{}", stepper.k)));
    metadata.push(("steps".into(), step.to_string()));
    metadata.push(("version".into(), env!("CARGO_PKG_VERSION").into()));
    Ok(RunArtifacts {
        grid: setup.grid,
        component_names: setup.component_names,
        snapshots,
        monitors,
        metadata,
    })
}

/// TVNI, maximum principle and Kruzhkov residual on the forward-Euler
/// semidiscrete scheme with the TVNI timestep. The shift combines the
/// total-variation value `max|u f'| max(L1, L2)` with the larger one the
/// entropy argument needs to make `u f±(.)` increase independently of the
/// reconstruction argument, `max|u| max|f'| max(L1, L2)`; the two agree
/// for Burgers. The x-dependent traffic fluxes sit outside this scalar
/// theory and are skipped here (their range is monitored on the full run).
fn ode_property_checks(spec: &ExperimentSpec, checks: &mut Vec<CheckRow>) -> RunResult<()> {
    if matches!(spec.model, ModelKind::LwrBackward | ModelKind::LwrForward) {
        return Ok(());
    }
    let setup = build_setup(spec).map_err(RunError::Config)?;
    let (mut u, model): (CellField, Box<dyn FluxModel>) = match setup.state {
        RunState::Scalar { u, model } => (u, model),
        // The radial component of the system satisfies the scalar law.
        RunState::Kk(s) => (s.r, Box::new(KkRadial)),
    };
    let limiter = spec.limiter;
    let (lo, hi) = (u.min(), u.max());
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let bounds = model.derivative_bounds(lo, hi);
    let (l_max, _) = limiter.l_bounds();
    let k = auto_k(model.as_ref(), lo, hi, limiter)
        .max(l_max * lo.abs().max(hi.abs()) * bounds.max_fprime);
    let cfg = SchemeConfig {
        limiter,
        tvni_mode: true,
        dt_max: spec.dt_max,
        ..SchemeConfig::default()
    };
    let a_samples: Vec<f64> = (0..=12).map(|i| lo + (hi - lo) * i as f64 / 12.0).collect();
    // The cell-wise entropy inequality needs u f±(.) ordered against
    // a f±(a) whatever the reconstruction argument is, which a finite k
    // only delivers when the slope itself is monotone over the range
    // (Burgers yes; the Keyfitz-Kranzer phi dips at r = 2).
    let slope_monotone = {
        let mut inc = true;
        let mut dec = true;
        let mut prev = model.noflow_slope(lo, 0.0, 0.0);
        for i in 1..=200 {
            let v = model.noflow_slope(lo + (hi - lo) * i as f64 / 200.0, 0.0, 0.0);
            inc &= v >= prev - 1e-14;
            dec &= v <= prev + 1e-14;
            prev = v;
        }
        inc || dec
    };

    let mut worst_tv = f64::NEG_INFINITY;
    let mut worst_range = f64::NEG_INFINITY;
    let mut worst_kruzhkov = f64::NEG_INFINITY;
    let mut t = 0.0;
    for _ in 0..50 {
        let f = noflow_slopes(&u, model.as_ref(), limiter, t)?;
        let dt = select_dt(&f, setup.grid.h(), &cfg, k, Some(&bounds));
        let tv0 = tv_eps(&u);
        let rhs = semidiscrete_rhs(&u, model.as_ref(), limiter, k, t)?;
        let next = CellField::new(
            setup.grid,
            u.values().iter().zip(rhs.values()).map(|(a, b)| a + dt * b).collect(),
        );
        worst_tv = worst_tv.max(tv_eps(&next) - tv0);
        worst_range = worst_range.max(next.max() - hi).max(lo - next.min());
        if slope_monotone {
            let fp: Vec<f64> = f.iter().map(|&v| split_flux(v, k).0).collect();
            let fm: Vec<f64> = f.iter().map(|&v| split_flux(v, k).1).collect();
            for &a in &a_samples {
                let fa = model.noflow_slope(a, 0.0, t);
                let r = kruzhkov_residual(&u, &next, &fp, &fm, a, fa, k, dt);
                worst_kruzhkov = worst_kruzhkov.max(r);
            }
        }
        u = next;
        t += dt;
    }
    let tv_limit = 1e-12 * scale;
    checks.push(CheckRow::new("ode_tvni", worst_tv.max(0.0), tv_limit, worst_tv <= tv_limit));
    let range_limit = 1e-12 * scale;
    checks.push(CheckRow::new(
        "ode_max_principle",
        worst_range.max(0.0),
        range_limit,
        worst_range <= range_limit,
    ));
    if slope_monotone {
        checks.push(CheckRow::new(
            "ode_kruzhkov_residual",
            worst_kruzhkov,
            1e-10,
            worst_kruzhkov <= 1e-10,
        ));
    }
    Ok(())
}

/// Density-range monitor of the traffic runs: the admissible band is
/// `[0, 1]`. The forward-looking horizon preserves it; the backward one
/// genuinely does not, and this row reports by how much.
fn density_range_check(art: &RunArtifacts, checks: &mut Vec<CheckRow>) {
    let mut worst = 0.0f64;
    for row in &art.monitors {
        worst = worst.max(row.u_max - 1.0).max(-row.u_min);
    }
    checks.push(CheckRow::new("density_range", worst, 1e-8, worst <= 1e-8));
}

/// Upwind reduction, the k-shift identity and the semidiscrete
/// compatibility order, exercised on the experiment's own initial data.
fn structural_checks(spec: &ExperimentSpec, checks: &mut Vec<CheckRow>) -> RunResult<()> {
    let setup = build_setup(spec).map_err(RunError::Config)?;
    let grid = setup.grid;
    let h = grid.h();
    let (u0, mut model): (CellField, Box<dyn FluxModel>) = match setup.state {
        RunState::Scalar { u, model } => (u, model),
        RunState::Kk(s) => (s.r, Box::new(KkRadial)),
    };
    model.pre_step(&u0, 0.0);

    // Constant slopes make one step of the scheme the upwind update.
    let advect = noflow::models::LinearAdvection { velocity: 0.8 };
    let f = noflow_slopes(&u0, &advect, spec.limiter, 0.0)?;
    let dt = 0.45 * h / 0.8;
    let (next, _) = nsle_step_with_slopes(&u0, &f, 0.0, dt)?;
    let nu = 0.8 * dt / h;
    let mut worst = 0.0f64;
    for j in 0..u0.len() {
        let upwind = nu * u0.at(j as isize - 1) + (1.0 - nu) * u0.at(j as isize);
        worst = worst.max((next.values()[j] - upwind).abs());
    }
    let scale = u0.min().abs().max(u0.max().abs()).max(1.0);
    let limit = 1e-13 * scale;
    checks.push(CheckRow::new("upwind_equivalence", worst, limit, worst <= limit));

    // k-shifted projection equals the unshifted one plus a discrete
    // Laplacian of the evolved averages.
    let f = noflow_slopes(&u0, model.as_ref(), spec.limiter, 0.0)?;
    let k = 0.4;
    let cfg = SchemeConfig::default();
    let dt = select_dt(&f, h, &cfg, k, None);
    let widths = scheme::evolve_widths(&f, h, dt)?;
    let ubar = scheme::conserve(&u0, &widths);
    let split_arrays = |k: f64| {
        let fp: Vec<f64> = f.iter().map(|&v| split_flux(v, k).0).collect();
        let fm: Vec<f64> = f.iter().map(|&v| split_flux(v, k).1).collect();
        (fp, fm)
    };
    let (fp0, fm0) = split_arrays(0.0);
    let (fpk, fmk) = split_arrays(k);
    let base = scheme::project(&ubar, &fp0, &fm0, dt)?;
    let shifted = scheme::project(&ubar, &fpk, &fmk, dt)?;
    let mut worst = 0.0f64;
    for j in 0..u0.len() {
        let lap =
            ubar.at(j as isize - 1) - 2.0 * ubar.at(j as isize) + ubar.at(j as isize + 1);
        let expect = base.values()[j] + k * dt / h * lap;
        worst = worst.max((shifted.values()[j] - expect).abs());
    }
    let limit = 1e-13 * scale;
    checks.push(CheckRow::new("k_shift_identity", worst, limit, worst <= limit));

    // One projection step approaches U + dt * rhs(U) at second order, so
    // the defect divided by dt vanishes linearly.
    let f_max = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dt0 = (h / 4.0).min(0.45 * h / f_max.max(1e-300));
    let rhs = semidiscrete_rhs(&u0, model.as_ref(), spec.limiter, 0.0, 0.0)?;
    let mut pts = Vec::new();
    for denom in [1.0, 2.0, 4.0] {
        let dt = dt0 / denom;
        let (stepped, _) = nsle_step_with_slopes(&u0, &f, 0.0, dt)?;
        let euler = CellField::new(
            grid,
            u0.values().iter().zip(rhs.values()).map(|(a, b)| a + dt * b).collect(),
        );
        pts.push((dt, l1_error(&stepped, &euler)? / dt));
    }
    // Symmetric data can make the projection agree with the Euler step
    // identically; that degenerate case is compatibility at its best.
    if pts.iter().all(|p| p.1 <= 1e-12 * scale) {
        checks.push(CheckRow {
            name: "prop2_compatibility_order".into(),
            observed: "defect at rounding level".into(),
            limit: "order >= 0.9".into(),
            pass: true,
        });
    } else {
        let fit: Vec<(f64, f64)> = pts.iter().map(|&(dt, d)| (dt, d.max(1e-300))).collect();
        let (_, order) = fit_rate(&fit)?;
        checks.push(CheckRow::new("prop2_compatibility_order", order, 0.9, order >= 0.9));
    }
    Ok(())
}

/// The finest-grid field from a sweep-style self-reference run, exposed
/// for tests that need the raw field rather than the error table.
pub fn reference_run(spec: &ExperimentSpec, cells: usize) -> RunResult<CellField> {
    let mut s = spec.clone();
    s.n_cells = cells;
    let art = run(&s)?;
    let comp = build_setup(&s).map_err(RunError::Config)?.error_component;
    Ok(art.final_component(comp))
}
