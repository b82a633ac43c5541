//! Shared fixtures for the solver benchmarks.

use noflow::grid::{Boundary, CellField, Grid};
use noflow::metrics::smooth_cell_averages;
use std::f64::consts::PI;

/// Periodic sine field on [0, 1], the generic smooth stepping workload.
pub fn sine_field(n: usize) -> CellField {
    let grid = Grid::new(0.0, 1.0, n, Boundary::Periodic);
    CellField::new(grid, smooth_cell_averages(&grid, |x| 1.0 + 0.5 * (2.0 * PI * x).sin()))
}
