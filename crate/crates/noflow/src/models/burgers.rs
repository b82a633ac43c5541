//! Inviscid Burgers model with the two reference Riemann problems, plus
//! constant-velocity advection.

use super::{DerivBounds, ExactSolution, FluxModel};

/// `H(u) = u^2 / 2`, no-flow slope `f(u) = u / 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Burgers;

impl FluxModel for Burgers {
    fn flux(&self, u: f64, _x: f64, _t: f64) -> f64 {
        0.5 * u * u
    }

    fn noflow_slope(&self, u: f64, _x: f64, _t: f64) -> f64 {
        0.5 * u
    }

    fn derivative_bounds(&self, lo: f64, hi: f64) -> DerivBounds {
        // u f'(u) = u/2 and H'(u) = u are both monotone in |u|.
        let umax = lo.abs().max(hi.abs());
        DerivBounds { max_u_fprime: 0.5 * umax, max_h_prime: umax, max_fprime: 0.5 }
    }

    fn dflux(&self, u: f64, _x: f64, _t: f64) -> f64 {
        u
    }

    fn sonic_point(&self) -> Option<f64> {
        Some(0.0)
    }

    fn is_convex(&self) -> bool {
        true
    }
}

/// `H(u) = a u`; the no-flow slope is the constant `a`, so the scheme
/// reduces exactly to first-order upwind.
#[derive(Debug, Clone, Copy)]
pub struct LinearAdvection {
    pub velocity: f64,
}

impl FluxModel for LinearAdvection {
    fn flux(&self, u: f64, _x: f64, _t: f64) -> f64 {
        self.velocity * u
    }

    fn noflow_slope(&self, _u: f64, _x: f64, _t: f64) -> f64 {
        self.velocity
    }

    fn derivative_bounds(&self, _lo: f64, _hi: f64) -> DerivBounds {
        DerivBounds { max_u_fprime: 0.0, max_h_prime: self.velocity.abs(), max_fprime: 0.0 }
    }

    fn dflux(&self, _u: f64, _x: f64, _t: f64) -> f64 {
        self.velocity
    }

    fn is_convex(&self) -> bool {
        true
    }
}

/// Piecewise solution assembled from plateau states, moving interfaces and
/// an optional fan. Covers both Burgers reference problems.
#[derive(Debug, Clone)]
pub enum PiecewiseExact {
    /// Two merging shocks: states 2/1/0 with interfaces at
    /// `x = 1/4 + 3t/2` and `x = 1/2 + t/2` until they collide at
    /// `t = 1/4`, then a single 2/0 shock along `x = 3/8 + t`.
    TwoShocks,
    /// Transonic rarefaction: -1 for `x <= -t`, `x/t` inside the fan,
    /// +1 for `x >= t`.
    Rarefaction,
}

impl ExactSolution for PiecewiseExact {
    fn value(&self, x: f64, t: f64) -> f64 {
        match self {
            PiecewiseExact::TwoShocks => {
                if t < 0.25 {
                    let x1 = 0.25 + 1.5 * t;
                    let x2 = 0.5 + 0.5 * t;
                    if x <= x1 {
                        2.0
                    } else if x < x2 {
                        1.0
                    } else {
                        0.0
                    }
                } else if x <= 0.375 + t {
                    2.0
                } else {
                    0.0
                }
            }
            PiecewiseExact::Rarefaction => {
                if x <= -t {
                    -1.0
                } else if x < t {
                    x / t
                } else {
                    1.0
                }
            }
        }
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        match self {
            PiecewiseExact::TwoShocks => {
                if t < 0.25 {
                    vec![0.25 + 1.5 * t, 0.5 + 0.5 * t]
                } else {
                    vec![0.375 + t]
                }
            }
            PiecewiseExact::Rarefaction => {
                if t > 0.0 {
                    vec![-t, t]
                } else {
                    vec![0.0]
                }
            }
        }
    }
}

/// Exact solution of problem P1 (two merging shocks on `[0, 1]`).
pub fn p1_exact() -> PiecewiseExact {
    PiecewiseExact::TwoShocks
}

/// Exact solution of problem P2 (transonic rarefaction on `[-1, 1]`).
pub fn p2_exact() -> PiecewiseExact {
    PiecewiseExact::Rarefaction
}
