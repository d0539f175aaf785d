//! Filtering error covariance: the residual second moments of the optimal
//! one-step filter.
//!
//! Two routes are provided on purpose. The closed form scales the signal
//! block by `1 - gamma`, where `gamma` is the squared correlation
//! `R_ab^2 / (R_a R_b)`; the direct form evaluates the conditional
//! covariance `S - C B^-1 C*` from the blocks themselves. On exact
//! regression-form inputs the two agree to round-off, which pins down the
//! overall `R_alpha` scale of the closed form.

use crate::covariance::{invert_cov2, steady_cross_cov, Cov2, CrossCov2};
use crate::error::DmdError;
use crate::model::{stationary_variance, SignalObservationModel};

/// Squared correlation coefficient `R_ab^2 / (R_a R_b)` in [0, 1]: the
/// fraction of signal variance the filter removes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaCoefficient {
    value: f64,
}

impl GammaCoefficient {
    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Tolerance by which the squared correlation may exceed 1 before the
/// covariance inputs are declared inconsistent.
const GAMMA_EXCESS_TOL: f64 = 1e-10;

/// Squared correlation from a cross-covariance and the two variances.
///
/// Values within round-off above 1 are clamped; larger excesses are an
/// error because no joint distribution can produce them.
pub fn gamma_coefficient(r_ab: f64, r_a: f64, r_b: f64) -> Result<GammaCoefficient, DmdError> {
    if !r_a.is_finite() || r_a <= 0.0 {
        return Err(DmdError::NonPositiveVariance(r_a));
    }
    if !r_b.is_finite() || r_b <= 0.0 {
        return Err(DmdError::NonPositiveVariance(r_b));
    }
    let value = r_ab * r_ab / (r_a * r_b);
    if value > 1.0 + GAMMA_EXCESS_TOL {
        return Err(DmdError::InconsistentCovariances(value));
    }
    Ok(GammaCoefficient {
        value: value.min(1.0),
    })
}

/// Squared correlation of a model's exact stationary law.
pub fn theoretical_gamma(model: &SignalObservationModel) -> Result<GammaCoefficient, DmdError> {
    gamma_coefficient(
        steady_cross_cov(model),
        stationary_variance(model.signal()),
        stationary_variance(model.observation()),
    )
}

/// Symmetric 2x2 error covariance of `(alpha - alpha_hat,
/// d_alpha - d_alpha_hat)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMatrix {
    pub g11: f64,
    pub g12: f64,
    pub g21: f64,
    pub g22: f64,
}

impl ErrorMatrix {
    /// Scalar mean-square error `g11 + g22`.
    pub fn trace(&self) -> f64 {
        self.g11 + self.g22
    }

    /// Largest absolute difference to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.g11 - other.g11)
            .abs()
            .max((self.g12 - other.g12).abs())
            .max((self.g21 - other.g21).abs())
            .max((self.g22 - other.g22).abs())
    }
}

/// Closed-form error matrix of the optimal one-step filter:
///
/// ```text
/// G = R_alpha (1 - gamma) [ 1    -V0   ]   [ 0   0        ]
///                         [ -V0   V0^2 ] + [ 0   sigma0^2 ]
/// ```
///
/// At `gamma = 0` this is the prior signal block (no information); at
/// `gamma = 1` only the irreducible one-step noise `sigma0^2` remains.
pub fn error_matrix(model: &SignalObservationModel, gamma: &GammaCoefficient) -> ErrorMatrix {
    let v0 = model.signal().v();
    let s0 = model.signal().sigma();
    let r_alpha = stationary_variance(model.signal());
    let shrink = r_alpha * (1.0 - gamma.value);
    ErrorMatrix {
        g11: shrink,
        g12: -v0 * shrink,
        g21: -v0 * shrink,
        g22: v0 * v0 * shrink + s0 * s0,
    }
}

/// Scalar mean-square error, the trace `g11 + g22`.
pub fn error_trace(gamma_matrix: &ErrorMatrix) -> f64 {
    gamma_matrix.trace()
}

/// Relative asymmetry beyond which the direct evaluation is rejected.
const ASYMMETRY_TOL: f64 = 1e-10;

/// Error matrix by direct conditional-covariance evaluation
/// `S - C B^-1 C*`.
///
/// The result is symmetrized by averaging the off-diagonal entries; an
/// asymmetry beyond round-off is rejected because the inputs cannot then
/// be a covariance system. This is the independent route used to validate
/// the closed form.
pub fn error_matrix_from_blocks(
    signal_block: &Cov2,
    cross: &CrossCov2,
    obs_block: &Cov2,
) -> Result<ErrorMatrix, DmdError> {
    let inv = invert_cov2(obs_block)?;
    // M = C B^-1
    let m11 = cross.c11 * inv.m11 + cross.c12 * inv.m12;
    let m12 = cross.c11 * inv.m12 + cross.c12 * inv.m22;
    let m21 = cross.c21 * inv.m11 + cross.c22 * inv.m12;
    let m22 = cross.c21 * inv.m12 + cross.c22 * inv.m22;
    // P = M C*
    let p11 = m11 * cross.c11 + m12 * cross.c12;
    let p12 = m11 * cross.c21 + m12 * cross.c22;
    let p21 = m21 * cross.c11 + m22 * cross.c12;
    let p22 = m21 * cross.c21 + m22 * cross.c22;

    let g11 = signal_block.m11 - p11;
    let g12 = signal_block.m12 - p12;
    let g21 = signal_block.m12 - p21;
    let g22 = signal_block.m22 - p22;

    let scale = g11
        .abs()
        .max(g12.abs())
        .max(g21.abs())
        .max(g22.abs())
        .max(f64::MIN_POSITIVE);
    let asymmetry = (g12 - g21).abs() / scale;
    if asymmetry > ASYMMETRY_TOL {
        return Err(DmdError::AsymmetricCovariance {
            relative: asymmetry,
        });
    }
    let off = 0.5 * (g12 + g21);
    Ok(ErrorMatrix {
        g11,
        g12: off,
        g21: off,
        g22,
    })
}

/// Closed-form error matrix of a model's exact stationary law.
pub fn theoretical_error_matrix(model: &SignalObservationModel) -> Result<ErrorMatrix, DmdError> {
    Ok(error_matrix(model, &theoretical_gamma(model)?))
}
