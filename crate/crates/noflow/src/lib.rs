//! A 1D solver library for scalar hyperbolic conservation laws (and small
//! systems) built on the nonstaggered Lagrangian-Eulerian scheme: no-flow
//! edge slopes `f = H(u)/u`, a one-step moved mesh, and projection back
//! onto the fixed grid with nonnegative weights.
//!
//! The crate also carries the verification apparatus around the scheme:
//! first-order reference schemes (Godunov / Rusanov / Lax-Friedrichs),
//! discrete L1 and 1D Wasserstein error functionals, total-variation and
//! entropy monitors, and log-log convergence-rate fitting.

pub mod baselines;
pub mod error;
pub mod grid;
pub mod limiters;
pub mod metrics;
pub mod models;
pub mod scheme;

pub use error::{Result, SolverError};
pub use grid::{Boundary, CellField, Grid};
pub use limiters::LimiterKind;
pub use metrics::{ErrorRow, ErrorTable};
pub use models::{DerivBounds, ExactSolution, FluxModel};
pub use scheme::{KShift, SchemeConfig, StepReport};
