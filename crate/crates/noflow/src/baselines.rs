//! First-order reference schemes on the same grid plumbing: Godunov
//! (exact interface flux for convex scalar fluxes), Rusanov, and
//! Lax-Friedrichs. Used as comparators for the Burgers problems.

use crate::error::{Result, SolverError};
use crate::grid::CellField;
use crate::models::FluxModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Godunov,
    Rusanov,
    LaxFriedrichs,
}

/// CFL safety factor for the baseline schemes (their stability constraint
/// is `dt max|H'| <= h`, unlike the weak CFL of the main scheme).
pub const BASELINE_CFL: f64 = 0.9;

/// Baseline timestep `0.9 h / max |H'|` over the invariant range.
pub fn baseline_select_dt(model: &dyn FluxModel, lo: f64, hi: f64, h: f64) -> f64 {
    let speed = model.derivative_bounds(lo, hi).max_h_prime;
    if speed > 0.0 {
        BASELINE_CFL * h / speed
    } else {
        h
    }
}

fn godunov_flux(model: &dyn FluxModel, ul: f64, ur: f64, x: f64, t: f64) -> f64 {
    let hl = model.flux(ul, x, t);
    let hr = model.flux(ur, x, t);
    if ul <= ur {
        // Minimum over [ul, ur]: at the sonic state if it lies inside.
        match model.sonic_point() {
            Some(s) if s > ul && s < ur => model.flux(s, x, t),
            _ => hl.min(hr),
        }
    } else {
        hl.max(hr)
    }
}

/// One conservative update `U_j - dt/h (F_{j+1/2} - F_{j-1/2})` with the
/// selected numerical flux. Godunov requires a convex flux.
pub fn baseline_step(
    u: &CellField,
    model: &dyn FluxModel,
    kind: BaselineKind,
    t: f64,
    dt: f64,
) -> Result<CellField> {
    if kind == BaselineKind::Godunov && !model.is_convex() {
        return Err(SolverError::NonConvexFlux);
    }
    let grid = u.grid();
    let h = grid.h();
    let n = u.len();
    let mut flux = vec![0.0; n + 1];
    for (i, fi) in flux.iter_mut().enumerate() {
        let ul = u.at(i as isize - 1);
        let ur = u.at(i as isize);
        let x = grid.edge(i);
        *fi = match kind {
            BaselineKind::Godunov => godunov_flux(model, ul, ur, x, t),
            BaselineKind::Rusanov => {
                let speed = model.dflux(ul, x, t).abs().max(model.dflux(ur, x, t).abs());
                0.5 * (model.flux(ul, x, t) + model.flux(ur, x, t)) - 0.5 * speed * (ur - ul)
            }
            BaselineKind::LaxFriedrichs => {
                0.5 * (model.flux(ul, x, t) + model.flux(ur, x, t)) - 0.5 * h / dt * (ur - ul)
            }
        };
    }
    let values = (0..n).map(|j| u.values()[j] - dt / h * (flux[j + 1] - flux[j])).collect();
    Ok(CellField::new(*grid, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Boundary, Grid};
    use crate::models::Burgers;

    #[test]
    fn constant_field_unchanged_for_all_kinds() {
        let grid = Grid::new(0.0, 1.0, 16, Boundary::Periodic);
        let u = CellField::constant(grid, 0.8);
        for kind in [BaselineKind::Godunov, BaselineKind::Rusanov, BaselineKind::LaxFriedrichs] {
            let next = baseline_step(&u, &Burgers, kind, 0.0, 0.01).unwrap();
            for v in next.values() {
                assert!((v - 0.8).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn godunov_shock_flux_takes_the_max() {
        // u_l = 2 > u_r = 0: flux = max(H(2), H(0)) = 2.
        assert_eq!(godunov_flux(&Burgers, 2.0, 0.0, 0.0, 0.0), 2.0);
        // Transonic rarefaction u_l = -1 < 0 < u_r = 1: sonic flux H(0) = 0.
        assert_eq!(godunov_flux(&Burgers, -1.0, 1.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn conservation_per_step_periodic() {
        let grid = Grid::new(0.0, 1.0, 64, Boundary::Periodic);
        let u = CellField::from_fn(grid, |x| 1.0 + 0.5 * (2.0 * std::f64::consts::PI * x).sin());
        let dt = baseline_select_dt(&Burgers, u.min(), u.max(), grid.h());
        for kind in [BaselineKind::Godunov, BaselineKind::Rusanov, BaselineKind::LaxFriedrichs] {
            let next = baseline_step(&u, &Burgers, kind, 0.0, dt).unwrap();
            assert!((next.mass() - u.mass()).abs() < 1e-13);
        }
    }

    #[test]
    fn godunov_rejects_nonconvex_models() {
        use crate::models::KkRadial;
        let grid = Grid::new(-1.0, 1.0, 8, Boundary::Periodic);
        let u = CellField::constant(grid, 1.0);
        assert!(matches!(
            baseline_step(&u, &KkRadial, BaselineKind::Godunov, 0.0, 1e-3),
            Err(SolverError::NonConvexFlux)
        ));
    }
}
