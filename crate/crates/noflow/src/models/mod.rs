//! Concrete flux models and the contract the stepper sees.

mod burgers;
mod kk;
mod lwr;

pub use burgers::{p1_exact, p2_exact, Burgers, LinearAdvection, PiecewiseExact};
pub use kk::{
    kk_initial_state, kk_radial_slopes, kk_select_dt, kk_step, kk_step_with_slopes, phi, KkRadial,
    KkState,
};
pub use lwr::{LwrNonlocal, NonlocalKernel};

use crate::grid::{CellField, Grid};

/// Derivative bounds of a model over an invariant range, used by the
/// k-shift and the TVNI timestep rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivBounds {
    /// `max |u f'(u)|` over the range.
    pub max_u_fprime: f64,
    /// `max |(u f(u))'| = max |H'(u)|` over the range.
    pub max_h_prime: f64,
    /// `max |f'(u)|` over the range.
    pub max_fprime: f64,
}

/// A reference solution that knows where its kinks and jumps sit, so cell
/// averages can be integrated exactly.
pub trait ExactSolution {
    fn value(&self, x: f64, t: f64) -> f64;

    /// Discontinuity / kink locations at time `t`, in increasing order.
    fn breakpoints(&self, t: f64) -> Vec<f64>;
}

/// Model contract for the scalar stepper.
///
/// `flux` is the conserved flux `H(u)`; `noflow_slope` is `f(u) = H(u)/u`
/// supplied directly as an analytic continuation so the solver never
/// divides by `u`. Models with spatial coupling (the nonlocal traffic
/// model) refresh their caches in `pre_step`, which the driver calls once
/// per time level before any slope evaluation.
pub trait FluxModel {
    fn flux(&self, u: f64, x: f64, t: f64) -> f64;

    fn noflow_slope(&self, u: f64, x: f64, t: f64) -> f64;

    /// Refresh per-step caches from the current field. No-op by default.
    fn pre_step(&mut self, _field: &CellField, _t: f64) {}

    /// No-flow slopes at the grid edges from reconstructed edge values.
    /// `out` has one entry per edge (`n_cells + 1`).
    fn slope_at_edges(&self, edge_values: &[f64], grid: &Grid, t: f64, out: &mut [f64]) {
        debug_assert_eq!(edge_values.len(), out.len());
        for (i, (v, o)) in edge_values.iter().zip(out.iter_mut()).enumerate() {
            *o = self.noflow_slope(*v, grid.edge(i), t);
        }
    }

    /// Derivative bounds over `[lo, hi]`. The default densely samples the
    /// pointwise slope (10^4 points, central differences) and applies a
    /// 5% safety factor; models with analytic derivatives override this.
    fn derivative_bounds(&self, lo: f64, hi: f64) -> DerivBounds {
        sampled_derivative_bounds(|u| self.noflow_slope(u, 0.0, 0.0), lo, hi)
    }

    /// `H'(u)`, used by the Rusanov flux. Central difference by default.
    fn dflux(&self, u: f64, x: f64, t: f64) -> f64 {
        let e = 1e-6 * (1.0 + u.abs());
        (self.flux(u + e, x, t) - self.flux(u - e, x, t)) / (2.0 * e)
    }

    /// Interior minimum of a convex flux (the sonic state), if any.
    fn sonic_point(&self) -> Option<f64> {
        None
    }

    /// Whether `H` is convex, which the Godunov flux requires.
    fn is_convex(&self) -> bool {
        false
    }

    fn exact(&self) -> Option<&dyn ExactSolution> {
        None
    }
}

/// Dense-sampling fallback for [`FluxModel::derivative_bounds`].
pub fn sampled_derivative_bounds(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> DerivBounds {
    const SAMPLES: usize = 10_000;
    const SAFETY: f64 = 1.05;
    let (lo, hi) = if hi - lo < 1e-12 {
        (lo - 5e-7, hi + 5e-7)
    } else {
        (lo, hi)
    };
    let du = (hi - lo) / SAMPLES as f64;
    let mut max_uf = 0.0f64;
    let mut max_hp = 0.0f64;
    let mut max_fp = 0.0f64;
    for i in 0..=SAMPLES {
        let u = lo + i as f64 * du;
        let fp = (f(u + du) - f(u - du)) / (2.0 * du);
        let fu = f(u);
        max_uf = max_uf.max((u * fp).abs());
        // (u f(u))' = f(u) + u f'(u)
        max_hp = max_hp.max((fu + u * fp).abs());
        max_fp = max_fp.max(fp.abs());
    }
    DerivBounds {
        max_u_fprime: SAFETY * max_uf,
        max_h_prime: SAFETY * max_hp,
        max_fprime: SAFETY * max_fp,
    }
}
