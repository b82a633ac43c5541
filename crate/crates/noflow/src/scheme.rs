//! The fully discrete nonstaggered Lagrangian-Eulerian stepper.
//!
//! One step: reconstruct edge states with a slope limiter, read the no-flow
//! slopes `f = H(u)/u` off the model, move the cell boundaries along those
//! slopes for one timestep, rescale the cell averages onto the moved cells
//! (local conservation), split the slopes into `f+ / f-` with an optional
//! k-shift, and project back onto the fixed grid with nonnegative weights.
//!
//! The semidiscrete right-hand side the scheme is compatible with in the
//! dt -> 0 limit is also provided; the total-variation, maximum-principle
//! and entropy monitors run on its forward-Euler discretization, which is
//! the form those guarantees are stated for.

use crate::error::{Result, SolverError};
use crate::grid::CellField;
use crate::limiters::LimiterKind;
use crate::models::{DerivBounds, FluxModel};

/// Width floor as a fraction of h. Falling below this is a hard error:
/// the timestep violated the weak CFL condition.
pub const WIDTH_FLOOR_FACTOR: f64 = 0.25;

/// Shift added to both split slopes: `f+ = max(f,0) + k`, `f- = max(-f,0) + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KShift {
    /// No shift; the projection weights are the plain geometric overlaps.
    Zero,
    /// A fixed nonnegative shift.
    Fixed(f64),
    /// `max |u f'(u)|` over the field range times the limiter bound,
    /// re-evaluated against the field it is resolved on. Drivers resolve
    /// this once at t = 0 and freeze the value for the whole run.
    Auto,
}

/// Scheme parameters shared by every run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub limiter: LimiterKind,
    /// Weak CFL number in (0, 1/2]: `max |f dt| <= cfl_number * h`.
    pub cfl_number: f64,
    pub k_shift: KShift,
    /// Additionally restrict dt by the total-variation-nonincreasing rule
    /// `dt (2k + (L1+L2) max|(u f(u))'|) <= h`.
    pub tvni_mode: bool,
    /// Timestep cap, also the fallback when all slopes vanish.
    pub dt_max: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            limiter: LimiterKind::MinMod2,
            cfl_number: 0.45,
            k_shift: KShift::Zero,
            tvni_mode: false,
            dt_max: 1.0,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(self.cfl_number > 0.0 && self.cfl_number <= 0.5) {
            return Err(format!("cfl_number {} outside (0, 0.5]", self.cfl_number));
        }
        if !self.limiter.validate() {
            return Err("MinMod3 alpha must be positive".into());
        }
        if let KShift::Fixed(k) = self.k_shift {
            if k < 0.0 || k.is_nan() {
                return Err(format!("k shift {k} must be nonnegative"));
            }
        }
        if self.dt_max <= 0.0 || self.dt_max.is_nan() {
            return Err(format!("dt_max {} must be positive", self.dt_max));
        }
        Ok(())
    }

    /// Concrete k value for this configuration against a given field.
    pub fn resolve_k(&self, model: &dyn FluxModel, field: &CellField) -> f64 {
        match self.k_shift {
            KShift::Zero => 0.0,
            KShift::Fixed(k) => k,
            KShift::Auto => auto_k(model, field.min(), field.max(), self.limiter),
        }
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct StepReport {
    pub dt_used: f64,
    pub mass: f64,
    pub tv_eps: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub max_entropy_residual: Option<f64>,
    pub new_widths_min: f64,
}

impl StepReport {
    /// Gather the per-step diagnostics from a field in one pass.
    pub fn from_field(u: &CellField, dt: f64, widths_min: f64) -> Self {
        let v = u.values();
        let h = u.grid().h();
        let mut sum = 0.0;
        let mut tv = 0.0;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut prev = v[0];
        for &x in v {
            sum += x;
            tv += (x - prev).abs();
            lo = lo.min(x);
            hi = hi.max(x);
            prev = x;
        }
        if u.grid().boundary() == crate::grid::Boundary::Periodic && v.len() > 1 {
            tv += (v[0] - prev).abs();
        }
        StepReport {
            dt_used: dt,
            mass: sum * h,
            tv_eps: tv * h,
            u_min: lo,
            u_max: hi,
            max_entropy_residual: None,
            new_widths_min: widths_min,
        }
    }
}

/// Reconstructed interface states `U_{j-1/2}`, one per edge:
/// `1/2 (U_{j-1} + U_j) + 1/8 (U'_j - U'_{j-1})`.
pub fn reconstruct_edges(u: &CellField, limiter: LimiterKind) -> Vec<f64> {
    let n = u.len();
    let v = u.values();
    // Slopes for cells -1..=n; the two ghost slopes come out of the same
    // window rule with boundary-mapped indices.
    let mut slopes = vec![0.0; n + 2];
    if n >= 5 {
        for j in 2..n - 2 {
            let w: &[f64; 5] = v[j - 2..j + 3].try_into().unwrap();
            slopes[j + 1] = limiter.slope(w);
        }
    }
    let lo = 2.min(n);
    let boundary_cells = (-1..lo as isize).chain((n as isize - 2).max(lo as isize)..=n as isize);
    for j in boundary_cells {
        let w = [u.at(j - 2), u.at(j - 1), u.at(j), u.at(j + 1), u.at(j + 2)];
        slopes[(j + 1) as usize] = limiter.slope(&w);
    }
    let mut edges = vec![0.0; n + 1];
    edges[0] = 0.5 * (u.at(-1) + v[0]) + 0.125 * (slopes[1] - slopes[0]);
    for i in 1..n {
        edges[i] = 0.5 * (v[i - 1] + v[i]) + 0.125 * (slopes[i + 1] - slopes[i]);
    }
    edges[n] = 0.5 * (v[n - 1] + u.at(n as isize)) + 0.125 * (slopes[n + 1] - slopes[n]);
    edges
}

/// No-flow slopes `f_{j±1/2}` at every edge.
pub fn noflow_slopes(
    u: &CellField,
    model: &dyn FluxModel,
    limiter: LimiterKind,
    t: f64,
) -> Result<Vec<f64>> {
    let edges = reconstruct_edges(u, limiter);
    let mut f = vec![0.0; edges.len()];
    model.slope_at_edges(&edges, u.grid(), t, &mut f);
    for (i, v) in f.iter().enumerate() {
        if !v.is_finite() {
            return Err(SolverError::NonFiniteSlope { edge: i, value: *v });
        }
    }
    Ok(f)
}

/// Evolved cell widths `h_j^{n+1} = h + (f_{j+1/2} - f_{j-1/2}) dt`.
pub fn evolve_widths(f_edges: &[f64], h: f64, dt: f64) -> Result<Vec<f64>> {
    let floor = WIDTH_FLOOR_FACTOR * h;
    let mut widths = vec![0.0; f_edges.len() - 1];
    for (j, w) in widths.iter_mut().enumerate() {
        *w = h + (f_edges[j + 1] - f_edges[j]) * dt;
        if *w < floor {
            return Err(SolverError::DegenerateCell { cell: j, width: *w, floor });
        }
    }
    Ok(widths)
}

/// Evolved averages on the moved mesh: `Ubar_j = (h / h_j^{n+1}) U_j`.
/// The per-cell mass `Ubar_j h_j^{n+1} = U_j h` is preserved identically.
pub fn conserve(u: &CellField, widths: &[f64]) -> CellField {
    let h = u.grid().h();
    let values = u.values().iter().zip(widths).map(|(v, w)| v * h / w).collect();
    CellField::new(*u.grid(), values)
}

/// `f+ = max(f, 0) + k`, `f- = max(-f, 0) + k`; always `f+ - f- = f`.
#[inline]
pub fn split_flux(f: f64, k: f64) -> (f64, f64) {
    (f.max(0.0) + k, (-f).max(0.0) + k)
}

/// Projection back onto the fixed grid:
/// `U_j^{n+1} = (c_{-1,j} Ubar_{j-1} + c_{0,j} Ubar_j + c_{+1,j} Ubar_{j+1}) / h`
/// with `c_{-1,j} = f+_{j-1/2} dt`, `c_{+1,j} = f-_{j+1/2} dt` and the
/// center weight making the three sum to h.
pub fn project(ubar: &CellField, f_plus: &[f64], f_minus: &[f64], dt: f64) -> Result<CellField> {
    let n = ubar.len();
    debug_assert_eq!(f_plus.len(), n + 1);
    debug_assert_eq!(f_minus.len(), n + 1);
    let h = ubar.grid().h();
    let v = ubar.values();
    let mut out = vec![0.0; n];
    // Incremental form of (c_{-1} um + c_0 u + c_{+1} up) / h; constant
    // states pass through bitwise.
    let cell = |j: usize, um: f64, up: f64| -> Result<f64> {
        let cm = f_plus[j] * dt;
        let cp = f_minus[j + 1] * dt;
        let c0 = h - cm - cp;
        if c0 < 0.0 {
            return Err(SolverError::NegativeCoefficient { cell: j, coeff: c0 });
        }
        Ok(v[j] + (cm * (um - v[j]) + cp * (up - v[j])) / h)
    };
    out[0] = cell(0, ubar.at(-1), if n > 1 { v[1] } else { ubar.at(1) })?;
    for j in 1..n.saturating_sub(1) {
        out[j] = cell(j, v[j - 1], v[j + 1])?;
    }
    if n > 1 {
        out[n - 1] = cell(n - 1, v[n - 2], ubar.at(n as isize))?;
    }
    Ok(CellField::new(*ubar.grid(), out))
}

/// One full step of the nonstaggered scheme.
pub fn nsle_step(
    u: &CellField,
    model: &dyn FluxModel,
    cfg: &SchemeConfig,
    t: f64,
    dt: f64,
) -> Result<(CellField, StepReport)> {
    let f_edges = noflow_slopes(u, model, cfg.limiter, t)?;
    let k = cfg.resolve_k(model, u);
    nsle_step_with_slopes(u, &f_edges, k, dt)
}

/// The step with edge slopes already in hand (shared with the system
/// stepper and with drivers that pick dt from the same slopes).
pub fn nsle_step_with_slopes(
    u: &CellField,
    f_edges: &[f64],
    k: f64,
    dt: f64,
) -> Result<(CellField, StepReport)> {
    let h = u.grid().h();
    let widths = evolve_widths(f_edges, h, dt)?;
    let ubar = conserve(u, &widths);
    let mut f_plus = vec![0.0; f_edges.len()];
    let mut f_minus = vec![0.0; f_edges.len()];
    for (i, &f) in f_edges.iter().enumerate() {
        let (p, m) = split_flux(f, k);
        f_plus[i] = p;
        f_minus[i] = m;
    }
    let next = project(&ubar, &f_plus, &f_minus, dt)?;
    let widths_min = widths.iter().copied().fold(f64::INFINITY, f64::min);
    let report = StepReport::from_field(&next, dt, widths_min);
    Ok((next, report))
}

/// Timestep from the weak CFL condition `max |f dt| <= cfl h`, optionally
/// tightened by the TVNI rule; falls back to `dt_max` when every slope
/// vanishes.
pub fn select_dt(
    f_edges: &[f64],
    h: f64,
    cfg: &SchemeConfig,
    k: f64,
    bounds: Option<&DerivBounds>,
) -> f64 {
    let f_max = f_edges.iter().fold(0.0f64, |m, f| m.max(f.abs()));
    let mut dt = if f_max > 0.0 { cfg.cfl_number * h / f_max } else { cfg.dt_max };
    if k > 0.0 {
        // Keep the center projection coefficient nonnegative:
        // dt (f+ + f-) <= dt (|f| + 2k) <= 2 cfl h <= h.
        dt = dt.min(2.0 * cfg.cfl_number * h / (f_max + 2.0 * k));
    }
    if cfg.tvni_mode {
        let b = bounds.expect("tvni_mode needs derivative bounds over the invariant range");
        let (_, l_sum) = cfg.limiter.l_bounds();
        let denom = 2.0 * k + l_sum * b.max_h_prime;
        if denom > 0.0 {
            dt = dt.min(h / denom);
        }
    }
    dt.min(cfg.dt_max)
}

/// Shift making `u f±(.)` monotone over the invariant range:
/// `k = max |u f'(u)| * max(L1, L2)` for the limiter's reconstruction
/// bounds (5/8 for MinMod2).
pub fn auto_k(model: &dyn FluxModel, lo: f64, hi: f64, limiter: LimiterKind) -> f64 {
    let (l_max, _) = limiter.l_bounds();
    model.derivative_bounds(lo, hi).max_u_fprime * l_max
}

/// Semidiscrete right-hand side the projection scheme is compatible with:
/// `(U_{j-1} f+_{j-1/2} - U_j f-_{j-1/2} - U_j f+_{j+1/2} + U_{j+1} f-_{j+1/2}) / h`.
pub fn semidiscrete_rhs(
    u: &CellField,
    model: &dyn FluxModel,
    limiter: LimiterKind,
    k: f64,
    t: f64,
) -> Result<CellField> {
    let f_edges = noflow_slopes(u, model, limiter, t)?;
    let h = u.grid().h();
    let v = u.values();
    let n = u.len();
    let mut out = vec![0.0; n];
    for (j, o) in out.iter_mut().enumerate() {
        let (fp_l, _) = split_flux(f_edges[j], k);
        let (_, fm_r) = split_flux(f_edges[j + 1], k);
        let um = u.at(j as isize - 1);
        let up = u.at(j as isize + 1);
        // Regrouped with f+ - f- = f so a constant state gives exactly 0.
        *o = (fp_l * (um - v[j]) + fm_r * (up - v[j]) + v[j] * (f_edges[j] - f_edges[j + 1])) / h;
    }
    Ok(CellField::new(*u.grid(), out))
}

/// Forward-Euler step of the semidiscrete form, `U + dt * rhs(U)`. This is
/// the discretization the TVNI / maximum-principle / entropy statements
/// hold for under the TVNI timestep rule.
pub fn ode_euler_step(
    u: &CellField,
    model: &dyn FluxModel,
    limiter: LimiterKind,
    k: f64,
    t: f64,
    dt: f64,
) -> Result<CellField> {
    let rhs = semidiscrete_rhs(u, model, limiter, k, t)?;
    let values = u.values().iter().zip(rhs.values()).map(|(a, b)| a + dt * b).collect();
    Ok(CellField::new(*u.grid(), values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Boundary, Grid};
    use crate::models::{Burgers, LinearAdvection};
    use rand::prelude::*;

    fn periodic(values: Vec<f64>, len: f64) -> CellField {
        let grid = Grid::new(0.0, len, values.len(), Boundary::Periodic);
        CellField::new(grid, values)
    }

    #[test]
    fn constant_field_is_stationary() {
        for boundary in [Boundary::Periodic, Boundary::ConstantExtension] {
            let grid = Grid::new(0.0, 1.0, 16, boundary);
            let u = CellField::constant(grid, 1.7);
            for limiter in [LimiterKind::MinMod2, LimiterKind::minmod3_default(), LimiterKind::Uno]
            {
                let cfg = SchemeConfig { limiter, ..SchemeConfig::default() };
                let (next, _) = nsle_step(&u, &Burgers, &cfg, 0.0, 0.02).unwrap();
                assert_eq!(next.values(), u.values());
            }
        }
    }

    #[test]
    fn alternating_burgers_slopes_and_edges() {
        // U = [0, 2, 0, 2] kills the MinMod slope; every edge state is 1,
        // every no-flow slope f = 1/2.
        let u = periodic(vec![0.0, 2.0, 0.0, 2.0], 4.0);
        let edges = reconstruct_edges(&u, LimiterKind::MinMod2);
        assert!(edges.iter().all(|e| (e - 1.0).abs() < 1e-15));
        let f = noflow_slopes(&u, &Burgers, LimiterKind::MinMod2, 0.0).unwrap();
        assert!(f.iter().all(|v| (v - 0.5).abs() < 1e-15));
        let widths = evolve_widths(&f, 1.0, 0.5).unwrap();
        assert!(widths.iter().all(|w| (w - 1.0).abs() < 1e-15));
    }

    #[test]
    fn four_cell_burgers_step_hand_walkthrough() {
        // With h = 1, dt = 1/2: c_{-1} = 1/4, c_0 = 3/4, so the update is
        // U_j <- U_{j-1}/4 + 3 U_j/4.
        let u = periodic(vec![0.0, 2.0, 0.0, 2.0], 4.0);
        let cfg = SchemeConfig::default();
        let (next, report) = nsle_step(&u, &Burgers, &cfg, 0.0, 0.5).unwrap();
        let expected = [0.5, 1.5, 0.5, 1.5];
        for (a, b) in next.values().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((report.mass - u.mass()).abs() < 1e-14);
        assert_eq!(report.new_widths_min, 1.0);
    }

    #[test]
    fn width_evolution_examples() {
        let w = evolve_widths(&[0.0, 0.4], 1.0, 0.5).unwrap();
        assert!((w[0] - 1.2).abs() < 1e-15);
        let w = evolve_widths(&[0.3, 0.3, 0.3], 1.0, 0.25).unwrap();
        assert!(w.iter().all(|x| (x - 1.0).abs() < 1e-15));
        let err = evolve_widths(&[2.0, 0.0], 1.0, 0.5).unwrap_err();
        assert!(matches!(err, SolverError::DegenerateCell { .. }));
    }

    #[test]
    fn conserve_examples() {
        let u = periodic(vec![2.0, 2.0], 2.0);
        let ubar = conserve(&u, &[1.25, 1.0]);
        assert!((ubar.values()[0] - 1.6).abs() < 1e-15);
        assert_eq!(ubar.values()[1], 2.0);
        // Mass identity on random data.
        let mut rng = StdRng::seed_from_u64(11);
        let vals: Vec<f64> = (0..32).map(|_| rng.random_range(-1.0..3.0)).collect();
        let u = periodic(vals, 1.0);
        let widths: Vec<f64> = (0..32).map(|_| rng.random_range(0.8..1.2) * u.grid().h()).collect();
        let ubar = conserve(&u, &widths);
        let m0 = u.mass();
        let m1: f64 = ubar.values().iter().zip(&widths).map(|(v, w)| v * w).sum();
        assert!((m0 - m1).abs() < 1e-13 * m0.abs().max(1.0));
    }

    #[test]
    fn split_flux_examples() {
        assert_eq!(split_flux(0.5, 0.0), (0.5, 0.0));
        assert_eq!(split_flux(-1.2, 0.0), (0.0, 1.2));
        let (p, m) = split_flux(0.5, 0.3);
        assert!((p - 0.8).abs() < 1e-15 && (m - 0.3).abs() < 1e-15);
        assert!((p - m - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projection_with_zero_slopes_is_identity() {
        let u = periodic(vec![1.0, -2.0, 0.5, 3.0], 4.0);
        let fp = vec![0.0; 5];
        let fm = vec![0.0; 5];
        let out = project(&u, &fp, &fm, 0.7).unwrap();
        assert_eq!(out.values(), u.values());
    }

    #[test]
    fn constant_positive_flux_reduces_to_upwind() {
        let a = 0.8;
        let model = LinearAdvection { velocity: a };
        let mut rng = StdRng::seed_from_u64(3);
        let vals: Vec<f64> = (0..64).map(|_| rng.random_range(-2.0..2.0)).collect();
        let u = periodic(vals, 1.0);
        let h = u.grid().h();
        let dt = 0.45 * h / a;
        let cfg = SchemeConfig::default();
        let (next, _) = nsle_step(&u, &model, &cfg, 0.0, dt).unwrap();
        let nu = a * dt / h;
        for j in 0..u.len() {
            let upwind = nu * u.at(j as isize - 1) + (1.0 - nu) * u.at(j as isize);
            assert!(
                (next.values()[j] - upwind).abs() < 1e-14,
                "cell {j}: {} vs {upwind}",
                next.values()[j]
            );
        }
    }

    #[test]
    fn conservation_per_step_periodic_any_k() {
        let mut rng = StdRng::seed_from_u64(17);
        for &k in &[0.0, 0.4, 1.3] {
            let vals: Vec<f64> = (0..128).map(|_| rng.random_range(0.0..2.0)).collect();
            let u = periodic(vals, 1.0);
            let f = noflow_slopes(&u, &Burgers, LimiterKind::MinMod2, 0.0).unwrap();
            let cfg = SchemeConfig { tvni_mode: false, ..SchemeConfig::default() };
            let dt = select_dt(&f, u.grid().h(), &cfg, k, None).min(
                // keep the center coefficient positive for large k
                u.grid().h() / (2.0 * k + 1.0),
            );
            let (next, _) = nsle_step_with_slopes(&u, &f, k, dt).unwrap();
            let tol = 10.0 * f64::EPSILON * u.len() as f64 * u.mass().abs().max(1.0);
            assert!((next.mass() - u.mass()).abs() <= tol, "k = {k}");
        }
    }

    #[test]
    fn k_shift_is_a_discrete_laplacian_of_ubar() {
        let mut rng = StdRng::seed_from_u64(23);
        let vals: Vec<f64> = (0..48).map(|_| rng.random_range(-1.0..1.5)).collect();
        let u = periodic(vals, 1.0);
        let f = noflow_slopes(&u, &Burgers, LimiterKind::MinMod2, 0.0).unwrap();
        let h = u.grid().h();
        let k = 0.35;
        let dt = 0.1 * h / (2.0 * k + 1.0);
        let widths = evolve_widths(&f, h, dt).unwrap();
        let ubar = conserve(&u, &widths);
        let split = |k: f64| {
            let fp: Vec<f64> = f.iter().map(|&v| split_flux(v, k).0).collect();
            let fm: Vec<f64> = f.iter().map(|&v| split_flux(v, k).1).collect();
            (fp, fm)
        };
        let (fp0, fm0) = split(0.0);
        let (fpk, fmk) = split(k);
        let base = project(&ubar, &fp0, &fm0, dt).unwrap();
        let shifted = project(&ubar, &fpk, &fmk, dt).unwrap();
        for j in 0..u.len() {
            let lap = ubar.at(j as isize - 1) - 2.0 * ubar.at(j as isize)
                + ubar.at(j as isize + 1);
            let expect = base.values()[j] + k * dt / h * lap;
            assert!((shifted.values()[j] - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn select_dt_examples() {
        let cfg = SchemeConfig { cfl_number: 0.5, ..SchemeConfig::default() };
        let dt = select_dt(&[0.5, -0.5, 0.5], 0.01, &cfg, 0.0, None);
        assert!((dt - 0.01).abs() < 1e-15);
        let dt = select_dt(&[0.0, 0.0], 0.01, &cfg, 0.0, None);
        assert_eq!(dt, cfg.dt_max);
        // Burgers data in [-1, 1]: max |(u f)'| = 1, MinMod bound 5/4,
        // k = 5/8 * 1/2 gives dt <= h / (2k + 5/4).
        let bounds = Burgers.derivative_bounds(-1.0, 1.0);
        let k = auto_k(&Burgers, -1.0, 1.0, LimiterKind::MinMod2);
        let tvni = SchemeConfig { tvni_mode: true, cfl_number: 0.5, ..SchemeConfig::default() };
        let h = 0.01;
        let dt = select_dt(&[1e-9, 0.0], h, &tvni, k, Some(&bounds));
        assert!((dt - h / (2.0 * k + 1.25)).abs() < 1e-15);
    }

    #[test]
    fn auto_k_examples() {
        assert_eq!(auto_k(&LinearAdvection { velocity: 2.0 }, -1.0, 1.0, LimiterKind::MinMod2), 0.0);
        // Burgers on [0, 2]: max |u f'| = 1, MinMod bound 5/8.
        assert_eq!(auto_k(&Burgers, 0.0, 2.0, LimiterKind::MinMod2), 0.625);
    }

    #[test]
    fn semidiscrete_rhs_hand_values() {
        let u = periodic(vec![1.0, 1.0, 1.0], 3.0);
        let rhs = semidiscrete_rhs(&u, &Burgers, LimiterKind::MinMod2, 0.0, 0.0).unwrap();
        assert!(rhs.values().iter().all(|v| v.abs() < 1e-15));

        // Alternating field: every f+ = 1/2, f- = 0, so the rhs telescopes
        // to (U_{j-1} - U_j) / 2.
        let u = periodic(vec![0.0, 2.0, 0.0, 2.0], 4.0);
        let rhs = semidiscrete_rhs(&u, &Burgers, LimiterKind::MinMod2, 0.0, 0.0).unwrap();
        let expected = [1.0, -1.0, 1.0, -1.0];
        for (a, b) in rhs.values().iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn non_finite_slope_is_reported() {
        struct Bad;
        impl FluxModel for Bad {
            fn flux(&self, u: f64, _x: f64, _t: f64) -> f64 {
                u
            }
            fn noflow_slope(&self, u: f64, _x: f64, _t: f64) -> f64 {
                1.0 / u
            }
        }
        let grid = Grid::new(0.0, 1.0, 4, Boundary::Periodic);
        let u = CellField::new(grid, vec![1.0, -1.0, 1.0, -1.0]);
        let err = noflow_slopes(&u, &Bad, LimiterKind::MinMod2, 0.0).unwrap_err();
        assert!(matches!(err, SolverError::NonFiniteSlope { .. }));
    }
}
