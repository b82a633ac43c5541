//! Concrete experiment setups behind each model name: grid, initial data,
//! flux model, reference solution and default k-shift.

use crate::config::{CustomFlux, CustomInit, CustomSpec, ExperimentSpec, ModelKind};
use noflow::grid::{Boundary, CellField, Grid};
use noflow::metrics::{field_from_exact, smooth_cell_averages};
use noflow::models::{
    kk_initial_state, p1_exact, p2_exact, Burgers, ExactSolution, FluxModel, KkState, LinearAdvection,
    LwrNonlocal,
};
use noflow::KShift;
use std::f64::consts::PI;

/// Default k-shift of the traffic presets. Without a shift the backward
/// horizon overshoots the density band and its self-errors stall; shifts
/// in [0.3, 0.4] * max|rho V'| reproduce the reference error rows, and
/// 0.3 is the closest row-wise match (see the acceptance suite).
pub const LWR_DEFAULT_K: f64 = 0.3;

/// The queue initial density of the traffic runs.
#[derive(Debug, Clone, Copy)]
pub struct TrafficQueue;

impl ExactSolution for TrafficQueue {
    fn value(&self, x: f64, _t: f64) -> f64 {
        if (-2.8..=-1.8).contains(&x) {
            0.5
        } else if (-1.2..=-0.2).contains(&x) || (0.6..=1.0).contains(&x) {
            0.75
        } else if x >= 1.5 {
            1.0
        } else {
            0.0
        }
    }

    fn breakpoints(&self, _t: f64) -> Vec<f64> {
        vec![-2.8, -1.8, -1.2, -0.2, 0.6, 1.0, 1.5]
    }
}

/// Piecewise-constant Riemann datum (used by the custom model).
#[derive(Debug, Clone, Copy)]
struct RiemannInit {
    left: f64,
    right: f64,
    jump_at: f64,
}

impl ExactSolution for RiemannInit {
    fn value(&self, x: f64, _t: f64) -> f64 {
        if x < self.jump_at {
            self.left
        } else {
            self.right
        }
    }

    fn breakpoints(&self, _t: f64) -> Vec<f64> {
        vec![self.jump_at]
    }
}

/// Either a scalar field with its model or the three-component state.
pub enum RunState {
    Scalar { u: CellField, model: Box<dyn FluxModel> },
    Kk(KkState),
}

pub struct Setup {
    pub grid: Grid,
    pub state: RunState,
    pub exact: Option<Box<dyn ExactSolution>>,
    pub component_names: Vec<&'static str>,
    /// Component index errors are measured on in refinement sweeps.
    pub error_component: usize,
    pub default_k: KShift,
}

/// Build the grid a model runs on at a given resolution.
pub fn build_grid(model: ModelKind, n: usize, custom: &CustomSpec) -> Grid {
    match model {
        ModelKind::BurgersP1 => Grid::new(0.0, 1.0, n, Boundary::ConstantExtension),
        ModelKind::BurgersP2 => {
            // Shift by h/2 so the initial jump sits at a cell center; this
            // is the setup in which first-order schemes show the sonic
            // glitch (a cell pinned at the sonic state).
            let h = 2.0 / n as f64;
            Grid::new(-1.0 - 0.5 * h, 1.0 - 0.5 * h, n, Boundary::ConstantExtension)
        }
        ModelKind::LwrBackward | ModelKind::LwrForward => {
            Grid::new(-5.0, 5.0, n, Boundary::ConstantExtension)
        }
        ModelKind::KeyfitzKranzer => Grid::new(-1.0, 1.0, n, Boundary::Periodic),
        ModelKind::Custom => {
            let (xl, xr) = custom.domain;
            Grid::new(xl, xr, n, custom.boundary)
        }
    }
}

pub fn build_setup(spec: &ExperimentSpec) -> Result<Setup, String> {
    let grid = build_grid(spec.model, spec.n_cells, &spec.custom);
    match spec.model {
        ModelKind::BurgersP1 => {
            let exact = p1_exact();
            let u = field_from_exact(grid, &exact, 0.0);
            Ok(Setup {
                grid,
                state: RunState::Scalar { u, model: Box::new(Burgers) },
                exact: Some(Box::new(exact)),
                component_names: vec!["u"],
                error_component: 0,
                default_k: KShift::Zero,
            })
        }
        ModelKind::BurgersP2 => {
            let exact = p2_exact();
            let u = field_from_exact(grid, &exact, 0.0);
            Ok(Setup {
                grid,
                state: RunState::Scalar { u, model: Box::new(Burgers) },
                exact: Some(Box::new(exact)),
                component_names: vec!["u"],
                error_component: 0,
                default_k: KShift::Zero,
            })
        }
        ModelKind::LwrBackward | ModelKind::LwrForward => {
            // The horizon is the window a driver reacts to: backward sees
            // [x - 1/4, x], forward sees [x, x + 1/4].
            let (x1, x2) = if spec.model == ModelKind::LwrBackward {
                (0.25, 0.0)
            } else {
                (0.0, 0.25)
            };
            let model = LwrNonlocal::new(x1, x2, 1.0, grid).map_err(|e| e.to_string())?;
            let u = field_from_exact(grid, &TrafficQueue, 0.0);
            Ok(Setup {
                grid,
                state: RunState::Scalar { u, model: Box::new(model) },
                exact: None,
                component_names: vec!["rho"],
                error_component: 0,
                default_k: KShift::Fixed(LWR_DEFAULT_K),
            })
        }
        ModelKind::KeyfitzKranzer => Ok(Setup {
            grid,
            state: RunState::Kk(kk_initial_state(grid)),
            exact: None,
            component_names: vec!["r", "u1", "u2"],
            error_component: 1,
            default_k: KShift::Zero,
        }),
        ModelKind::Custom => {
            let model: Box<dyn FluxModel> = match spec.custom.flux {
                CustomFlux::Burgers => Box::new(Burgers),
                CustomFlux::Linear { velocity } => Box::new(LinearAdvection { velocity }),
            };
            let u = match spec.custom.init {
                CustomInit::Sine { offset, amplitude, frequency } => CellField::new(
                    grid,
                    smooth_cell_averages(&grid, |x| {
                        offset + amplitude * (2.0 * PI * frequency * x).sin()
                    }),
                ),
                CustomInit::Riemann { left, right, jump_at } => {
                    field_from_exact(grid, &RiemannInit { left, right, jump_at }, 0.0)
                }
            };
            Ok(Setup {
                grid,
                state: RunState::Scalar { u, model },
                exact: None,
                component_names: vec!["u"],
                error_component: 0,
                default_k: KShift::Zero,
            })
        }
    }
}
