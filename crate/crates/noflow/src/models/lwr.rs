//! Nonlocal Lighthill-Whitham-Richards traffic model.
//!
//! Continuity equation for the vehicle density with the speed law
//! `V(rho) = V_max (1 - rho)(1 - rho * eta)`, where `eta` is a one-sided
//! horizon kernel: a driver at `x` reacts to the average density on
//! `[x - x1, x + x2]`. The convolution is a sum of cell values weighted
//! by the kernel mass each cell covers, renormalized on the grid so the
//! weights carry unit mass exactly.

use super::{DerivBounds, FluxModel};
use crate::error::{Result, SolverError};
use crate::grid::{CellField, Grid};

/// Horizon kernel `eta(d) ~ ((d + x1)(x2 - d))^{5/2}` supported on
/// `[-x1, x2]`, integrated over grid cells and renormalized discretely.
#[derive(Debug, Clone)]
pub struct NonlocalKernel {
    x1: f64,
    x2: f64,
    /// Normalizer of the edge weights.
    alpha: f64,
    /// Weights at offsets `(d + 1/2) h` relative to an edge, starting at
    /// `d = edge_lo`.
    edge_weights: Vec<f64>,
    edge_lo: isize,
    /// Weights at offsets `d h` relative to a cell center.
    center_weights: Vec<f64>,
    center_lo: isize,
}

fn eta_unnormalized(d: f64, x1: f64, x2: f64) -> f64 {
    if d < -x1 || d > x2 {
        0.0
    } else {
        ((d + x1) * (x2 - d)).max(0.0).powf(2.5)
    }
}

impl NonlocalKernel {
    /// Integrate and renormalize the kernel for spacing `h`. The weight of
    /// the cell at offset `d` is the exact kernel mass over that cell's
    /// overlap with the support (10-point Gauss, the integrand is smooth),
    /// so a support that spans only a couple of cells still integrates
    /// cleanly. A support narrower than one cell is rejected.
    pub fn new(x1: f64, x2: f64, h: f64) -> Result<Self> {
        assert!(x1 >= 0.0 && x2 >= 0.0 && x1 + x2 > 0.0, "kernel horizon must be nonempty");
        let cell_mass = |a: f64, b: f64| -> f64 {
            let a = a.max(-x1);
            let b = b.min(x2);
            if b <= a {
                return 0.0;
            }
            const GX: [f64; 10] = [
                -0.9739065285171717,
                -0.8650633666889845,
                -0.6794095682990244,
                -0.4333953941292472,
                -0.1488743389816312,
                0.1488743389816312,
                0.4333953941292472,
                0.6794095682990244,
                0.8650633666889845,
                0.9739065285171717,
            ];
            const GW: [f64; 10] = [
                0.0666713443086881,
                0.1494513491505806,
                0.219086362515982,
                0.2692667193099963,
                0.2955242247147529,
                0.2955242247147529,
                0.2692667193099963,
                0.219086362515982,
                0.1494513491505806,
                0.0666713443086881,
            ];
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            GX.iter()
                .zip(&GW)
                .map(|(x, w)| w * eta_unnormalized(mid + half * x, x1, x2))
                .sum::<f64>()
                * half
        };
        // An edge sees the cell at offset d spanning [d h, (d+1) h];
        // a center sees [(d - 1/2) h, (d + 1/2) h].
        let sample = |left_of_cell0: f64| -> (isize, Vec<f64>) {
            let lo = ((-x1 - left_of_cell0) / h).floor() as isize;
            let hi = ((x2 - left_of_cell0) / h).ceil() as isize;
            let w: Vec<f64> = (lo..=hi)
                .map(|d| {
                    let a = left_of_cell0 + d as f64 * h;
                    cell_mass(a, a + h) / h
                })
                .collect();
            (lo, w)
        };
        if x1 + x2 < h {
            return Err(SolverError::KernelUnresolved { lo: -x1, hi: x2, h });
        }
        let (edge_lo, mut edge_weights) = sample(0.0);
        let (center_lo, mut center_weights) = sample(-0.5 * h);
        let normalize = |w: &mut Vec<f64>| -> Result<f64> {
            let s: f64 = w.iter().sum();
            if s <= 0.0 {
                return Err(SolverError::KernelUnresolved { lo: -x1, hi: x2, h });
            }
            let alpha = 1.0 / (s * h);
            w.iter_mut().for_each(|v| *v *= alpha);
            Ok(alpha)
        };
        let alpha = normalize(&mut edge_weights)?;
        normalize(&mut center_weights)?;
        Ok(Self { x1, x2, alpha, edge_weights, edge_lo, center_weights, center_lo })
    }

    pub fn horizon(&self) -> (f64, f64) {
        (self.x1, self.x2)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// How many cells of spacing `h` the support spans.
    pub fn support_cells(&self, h: f64) -> f64 {
        (self.x1 + self.x2) / h
    }

    /// Discrete mass `h * sum w` of the edge-aligned samples.
    pub fn edge_mass(&self, h: f64) -> f64 {
        self.edge_weights.iter().sum::<f64>() * h
    }

    pub fn center_mass(&self, h: f64) -> f64 {
        self.center_weights.iter().sum::<f64>() * h
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }
}

/// The nonlocal traffic model bound to a grid. `pre_step` refreshes the
/// convolution caches at edges and centers from the current density.
#[derive(Debug, Clone)]
pub struct LwrNonlocal {
    v_max: f64,
    kernel: NonlocalKernel,
    grid: Grid,
    conv_edges: Vec<f64>,
    conv_centers: Vec<f64>,
}

impl LwrNonlocal {
    pub fn new(x1: f64, x2: f64, v_max: f64, grid: Grid) -> Result<Self> {
        let kernel = NonlocalKernel::new(x1, x2, grid.h())?;
        Ok(Self {
            v_max,
            kernel,
            grid,
            conv_edges: vec![0.0; grid.n_cells() + 1],
            conv_centers: vec![0.0; grid.n_cells()],
        })
    }

    pub fn kernel(&self) -> &NonlocalKernel {
        &self.kernel
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    pub fn convolution_at_centers(&self) -> &[f64] {
        &self.conv_centers
    }

    /// Convolution cache linearly interpolated at an arbitrary position.
    fn conv_at(&self, x: f64) -> f64 {
        let n = self.conv_centers.len();
        if n == 1 {
            return self.conv_centers[0];
        }
        let p = ((x - self.grid.x_left()) / self.grid.h() - 0.5).clamp(0.0, (n - 1) as f64);
        let i = (p.floor() as usize).min(n - 2);
        let frac = p - i as f64;
        self.conv_centers[i] * (1.0 - frac) + self.conv_centers[i + 1] * frac
    }

    fn speed(&self, rho: f64, conv: f64) -> f64 {
        self.v_max * (1.0 - rho) * (1.0 - conv)
    }
}

impl FluxModel for LwrNonlocal {
    fn flux(&self, rho: f64, x: f64, t: f64) -> f64 {
        rho * self.noflow_slope(rho, x, t)
    }

    fn noflow_slope(&self, rho: f64, x: f64, _t: f64) -> f64 {
        self.speed(rho, self.conv_at(x))
    }

    fn pre_step(&mut self, field: &CellField, _t: f64) {
        let k = &self.kernel;
        for (i, c) in self.conv_edges.iter_mut().enumerate() {
            let mut s = 0.0;
            for (di, w) in k.edge_weights.iter().enumerate() {
                s += w * field.at(i as isize + k.edge_lo + di as isize);
            }
            *c = s * self.grid.h();
        }
        for (j, c) in self.conv_centers.iter_mut().enumerate() {
            let mut s = 0.0;
            for (di, w) in k.center_weights.iter().enumerate() {
                s += w * field.at(j as isize + k.center_lo + di as isize);
            }
            *c = s * self.grid.h();
        }
    }

    fn slope_at_edges(&self, edge_values: &[f64], _grid: &Grid, _t: f64, out: &mut [f64]) {
        for ((v, c), o) in edge_values.iter().zip(&self.conv_edges).zip(out.iter_mut()) {
            *o = self.speed(*v, *c);
        }
    }

    fn derivative_bounds(&self, lo: f64, hi: f64) -> DerivBounds {
        // (1 - conv) in [0, 1] scales both quantities, so conv = 0 is the
        // worst case: f0 = V_max (1 - rho) gives |rho f0'| = V_max |rho|
        // and |(rho f0)'| = V_max |1 - 2 rho|.
        let umax = lo.abs().max(hi.abs());
        let hmax = (1.0 - 2.0 * lo).abs().max((1.0 - 2.0 * hi).abs());
        DerivBounds {
            max_u_fprime: self.v_max * umax,
            max_h_prime: self.v_max * hmax,
            max_fprime: self.v_max,
        }
    }
}
