//! The 2x2 symmetric Keyfitz-Kranzer system in augmented `(r, u1, u2)`
//! form: `r_t + (r phi(r))_x = 0` and `u_t + (u phi(r))_x = 0` with
//! `r = |u|`. All three components ride the same no-flow slope
//! `f = phi(r)` evaluated at the reconstructed radial edge states, so one
//! scalar edge sweep drives three projections.

use super::{DerivBounds, FluxModel};
use crate::error::{Result, SolverError};
use crate::grid::{Boundary, CellField, Grid};
use crate::metrics::smooth_cell_averages;
use crate::scheme::{
    conserve, evolve_widths, project, reconstruct_edges, select_dt, split_flux, SchemeConfig,
    StepReport,
};
use std::f64::consts::PI;

/// `phi(r) = r^2 - 4r + 5.5`, minimal at `r = 2` where `phi = 1.5`.
#[inline]
pub fn phi(r: f64) -> f64 {
    r * r - 4.0 * r + 5.5
}

/// Scalar flux model of the radial component: `H(r) = r phi(r)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct KkRadial;

impl FluxModel for KkRadial {
    fn flux(&self, r: f64, _x: f64, _t: f64) -> f64 {
        r * phi(r)
    }

    fn noflow_slope(&self, r: f64, _x: f64, _t: f64) -> f64 {
        phi(r)
    }

    fn dflux(&self, r: f64, _x: f64, _t: f64) -> f64 {
        3.0 * r * r - 8.0 * r + 5.5
    }

    fn derivative_bounds(&self, lo: f64, hi: f64) -> DerivBounds {
        // r phi'(r) = 2r^2 - 4r has its interior extremum at r = 1;
        // H'(r) = 3r^2 - 8r + 5.5 at r = 4/3. Check ends and interior.
        let at = |r: f64| (2.0 * r * r - 4.0 * r, 3.0 * r * r - 8.0 * r + 5.5);
        let mut max_uf = 0.0f64;
        let mut max_hp = 0.0f64;
        for r in [lo, hi, 1.0, 4.0 / 3.0] {
            if r >= lo && r <= hi {
                let (uf, hp) = at(r);
                max_uf = max_uf.max(uf.abs());
                max_hp = max_hp.max(hp.abs());
            }
        }
        // phi'(r) = 2r - 4 is monotone, so its extremes sit at the ends.
        let max_fp = (2.0 * lo - 4.0).abs().max((2.0 * hi - 4.0).abs());
        DerivBounds { max_u_fprime: max_uf, max_h_prime: max_hp, max_fprime: max_fp }
    }
}

/// Radial and Cartesian components of the augmented system.
#[derive(Debug, Clone)]
pub struct KkState {
    pub r: CellField,
    pub u1: CellField,
    pub u2: CellField,
}

impl KkState {
    /// L1 drift between the transported radius and the one recomputed
    /// from the components (monitored, not enforced).
    pub fn radius_drift(&self) -> f64 {
        let h = self.r.grid().h();
        self.r
            .values()
            .iter()
            .zip(self.u1.values())
            .zip(self.u2.values())
            .map(|((r, a), b)| (r - (a * a + b * b).sqrt()).abs())
            .sum::<f64>()
            * h
    }
}

/// Reference initial data: `r0 = sin(pi x) + 1.5`, direction
/// `(sin(pi x), cos(pi x))`, periodic on `[-1, 1]`.
pub fn kk_initial_state(grid: Grid) -> KkState {
    assert_eq!(grid.boundary(), Boundary::Periodic, "the reference setup is periodic");
    let r0 = |x: f64| (PI * x).sin() + 1.5;
    let r = CellField::new(grid, smooth_cell_averages(&grid, r0));
    let u1 = CellField::new(grid, smooth_cell_averages(&grid, |x| r0(x) * (PI * x).sin()));
    let u2 = CellField::new(grid, smooth_cell_averages(&grid, |x| r0(x) * (PI * x).cos()));
    KkState { r, u1, u2 }
}

/// Radial edge slopes `phi(r_{j±1/2})`; fails on a negative reconstructed
/// radius. One sweep of these drives all three component updates.
pub fn kk_radial_slopes(state: &KkState, cfg: &SchemeConfig) -> Result<Vec<f64>> {
    let edges = reconstruct_edges(&state.r, cfg.limiter);
    let mut f = Vec::with_capacity(edges.len());
    for (i, &r) in edges.iter().enumerate() {
        if r < 0.0 {
            return Err(SolverError::NegativeRadius { edge: i, value: r });
        }
        f.push(phi(r));
    }
    Ok(f)
}

/// Timestep for the current state under the scheme's CFL rule.
pub fn kk_select_dt(state: &KkState, cfg: &SchemeConfig) -> Result<f64> {
    let f = kk_radial_slopes(state, cfg)?;
    let bounds = KkRadial.derivative_bounds(state.r.min(), state.r.max());
    let k = cfg.resolve_k(&KkRadial, &state.r);
    Ok(select_dt(&f, state.r.grid().h(), cfg, k, Some(&bounds)))
}

/// Advance all three components one step on shared no-flow slopes already
/// computed by [`kk_radial_slopes`].
pub fn kk_step_with_slopes(
    state: &KkState,
    f: &[f64],
    k: f64,
    dt: f64,
) -> Result<(KkState, StepReport)> {
    let h = state.r.grid().h();
    let widths = evolve_widths(f, h, dt)?;
    let mut f_plus = vec![0.0; f.len()];
    let mut f_minus = vec![0.0; f.len()];
    for (i, &v) in f.iter().enumerate() {
        let (p, m) = split_flux(v, k);
        f_plus[i] = p;
        f_minus[i] = m;
    }
    let advance = |u: &CellField| -> Result<CellField> {
        project(&conserve(u, &widths), &f_plus, &f_minus, dt)
    };
    let next = KkState { r: advance(&state.r)?, u1: advance(&state.u1)?, u2: advance(&state.u2)? };
    let widths_min = widths.iter().copied().fold(f64::INFINITY, f64::min);
    let report = StepReport::from_field(&next.r, dt, widths_min);
    Ok((next, report))
}

/// Advance all three components one step on the shared no-flow slopes.
pub fn kk_step(state: &KkState, cfg: &SchemeConfig, dt: f64) -> Result<(KkState, StepReport)> {
    let f = kk_radial_slopes(state, cfg)?;
    let k = cfg.resolve_k(&KkRadial, &state.r);
    kk_step_with_slopes(state, &f, k, dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kk_grid(n: usize) -> Grid {
        Grid::new(-1.0, 1.0, n, Boundary::Periodic)
    }

    #[test]
    fn phi_minimum_value() {
        assert_eq!(phi(2.0), 1.5);
        assert!(phi(1.9) > phi(2.0));
        assert!(phi(2.1) > phi(2.0));
    }

    #[test]
    fn constant_state_is_stationary() {
        let grid = kk_grid(32);
        let state = KkState {
            r: CellField::constant(grid, 2.0),
            u1: CellField::constant(grid, 1.2),
            u2: CellField::constant(grid, 1.6),
        };
        let cfg = SchemeConfig::default();
        let dt = kk_select_dt(&state, &cfg).unwrap();
        let (next, _) = kk_step(&state, &cfg, dt).unwrap();
        assert_eq!(next.r.values(), state.r.values());
        assert_eq!(next.u1.values(), state.u1.values());
        assert_eq!(next.u2.values(), state.u2.values());
    }

    #[test]
    fn initial_data_is_consistent() {
        let grid = kk_grid(512);
        let state = kk_initial_state(grid);
        assert!(state.r.min() >= 0.5 - 1e-6);
        assert!(state.r.max() <= 2.5 + 1e-6);
        // |u| = r holds for the initial data up to averaging error O(h^2).
        assert!(state.radius_drift() < 1e-4);
    }

    #[test]
    fn three_component_masses_conserved() {
        let grid = kk_grid(128);
        let mut state = kk_initial_state(grid);
        let cfg = SchemeConfig::default();
        let m0 = (state.r.mass(), state.u1.mass(), state.u2.mass());
        for _ in 0..50 {
            let dt = kk_select_dt(&state, &cfg).unwrap();
            state = kk_step(&state, &cfg, dt).unwrap().0;
        }
        let tol = 10.0 * f64::EPSILON * 128.0 * 50.0;
        assert!((state.r.mass() - m0.0).abs() < tol);
        assert!((state.u1.mass() - m0.1).abs() < tol);
        assert!((state.u2.mass() - m0.2).abs() < tol);
    }

    #[test]
    fn negative_radius_is_rejected() {
        let grid = kk_grid(16);
        let state = KkState {
            r: CellField::from_fn(grid, |x| (PI * x).sin() - 0.9),
            u1: CellField::constant(grid, 0.0),
            u2: CellField::constant(grid, 0.0),
        };
        let cfg = SchemeConfig::default();
        assert!(matches!(
            kk_step(&state, &cfg, 1e-3),
            Err(SolverError::NegativeRadius { .. })
        ));
    }
}
