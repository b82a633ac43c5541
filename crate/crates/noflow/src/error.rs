use thiserror::Error;

/// Errors surfaced by the solver and the error metrics.
///
/// Every variant signals a violated precondition rather than an internal
/// bug: degenerate cells and negative coefficients mean the timestep (or
/// the k-shift) was too aggressive, the rest are contract violations on
/// the inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("non-finite no-flow slope {value} at edge {edge}; the model must supply f = H(u)/u as an analytic continuation")]
    NonFiniteSlope { edge: usize, value: f64 },

    #[error("cell {cell} width evolved to {width:.6e} (floor {floor:.6e}); timestep violates the weak CFL condition")]
    DegenerateCell { cell: usize, width: f64, floor: f64 },

    #[error("negative center projection coefficient {coeff:.6e} at cell {cell}; reduce dt or the k-shift")]
    NegativeCoefficient { cell: usize, coeff: f64 },

    #[error("reconstructed radial state {value:.6e} at edge {edge} is negative")]
    NegativeRadius { edge: usize, value: f64 },

    #[error("kernel support [{lo}, {hi}] holds no quadrature point at spacing {h:.6e}")]
    KernelUnresolved { lo: f64, hi: f64, h: f64 },

    #[error("fields differ in mass by {defect:.6e}; the W1 distance needs a zero-mass difference")]
    MassMismatch { defect: f64 },

    #[error("a {fine}-cell grid is not an integer refinement of a {coarse}-cell grid")]
    IncompatibleGrids { fine: usize, coarse: usize },

    #[error("rate fitting needs at least two rows with positive error")]
    NeedTwoPoints,

    #[error("the Godunov flux requires a convex scalar flux function")]
    NonConvexFlux,
}

pub type Result<T> = std::result::Result<T, SolverError>;
