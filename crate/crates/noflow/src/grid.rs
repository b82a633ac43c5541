//! Uniform 1D grids and cell-average fields.

/// How out-of-domain neighbors are supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Wrap around; the domain is a circle.
    Periodic,
    /// Extend the outermost cell value to all ghost cells (far-field data
    /// for Riemann-type problems).
    ConstantExtension,
}

/// A uniform partition of `[x_left, x_right]` into `n_cells` cells.
///
/// Edge `i` sits at `x_left + i * h` for `i = 0..=n_cells`; cell `j` is
/// centered at `x_left + (j + 1/2) * h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_left: f64,
    x_right: f64,
    n_cells: usize,
    h: f64,
    boundary: Boundary,
}

impl Grid {
    pub fn new(x_left: f64, x_right: f64, n_cells: usize, boundary: Boundary) -> Self {
        assert!(x_right > x_left, "empty domain [{x_left}, {x_right}]");
        assert!(n_cells > 0, "grid needs at least one cell");
        let h = (x_right - x_left) / n_cells as f64;
        Self { x_left, x_right, n_cells, h, boundary }
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn cell_center(&self, j: usize) -> f64 {
        self.x_left + (j as f64 + 0.5) * self.h
    }

    pub fn edge(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.h
    }

    /// Map a (possibly out-of-range) cell index onto a stored one per the
    /// boundary rule. Clamping reproduces constant extension to any ghost
    /// depth.
    #[inline]
    pub fn wrap(&self, j: isize) -> usize {
        let n = self.n_cells as isize;
        match self.boundary {
            Boundary::Periodic => {
                // Ghost indices stay within a few cells of the domain, so
                // shifting beats a division.
                let mut j = j;
                while j < 0 {
                    j += n;
                }
                while j >= n {
                    j -= n;
                }
                j as usize
            }
            Boundary::ConstantExtension => j.clamp(0, n - 1) as usize,
        }
    }
}

/// Cell-average values of one scalar component on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    grid: Grid,
    values: Vec<f64>,
}

impl CellField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.n_cells(), "field length must match the grid");
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self { grid, values }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        let n = grid.n_cells();
        Self::new(grid, vec![value; n])
    }

    /// Build a field by evaluating `f` at cell centers.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n_cells()).map(|j| f(grid.cell_center(j))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Cell value with the grid's boundary rule applied to the index.
    #[inline]
    pub fn at(&self, j: isize) -> f64 {
        self.values[self.grid.wrap(j)]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Total mass `sum_j U_j h`.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.h()
    }
}
