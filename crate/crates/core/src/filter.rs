//! Optimal one-step filtering matrix and the parameter estimates it
//! carries.
//!
//! The best mean-square estimate of `(alpha(k), d_alpha(k+1))` given the
//! contemporaneous observation pair `(beta(k), d_beta(k+1))` is linear
//! with matrix `Phi = C B^-1`, where `C` is the cross block and `B` the
//! observation block. When the blocks take their regression form, the
//! second column of `Phi` vanishes and `phi21 = -V0 phi11`, which turns
//! the filter into a drift estimator.

use crate::covariance::{block_beta, invert_cov2, steady_cross_cov, Cov2, CrossCov2};
use crate::error::DmdError;
use crate::model::{effective_factor, SignalObservationModel};
use crate::trajectory::Trajectory;

/// 2x2 filtering operator mapping `(beta(k), d_beta(k+1))` to
/// `(alpha_hat(k), d_alpha_hat(k+1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterMatrix {
    pub phi11: f64,
    pub phi12: f64,
    pub phi21: f64,
    pub phi22: f64,
}

impl FilterMatrix {
    pub const ZERO: Self = Self {
        phi11: 0.0,
        phi12: 0.0,
        phi21: 0.0,
        phi22: 0.0,
    };

    pub fn new(phi11: f64, phi12: f64, phi21: f64, phi22: f64) -> Self {
        Self {
            phi11,
            phi12,
            phi21,
            phi22,
        }
    }

    /// Largest absolute difference to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.phi11 - other.phi11)
            .abs()
            .max((self.phi12 - other.phi12).abs())
            .max((self.phi21 - other.phi21).abs())
            .max((self.phi22 - other.phi22).abs())
    }
}

/// Signal estimates produced by applying a filter matrix along a
/// trajectory, one pair per step.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredEstimates {
    pub alpha_hat: Vec<f64>,
    pub d_alpha_hat: Vec<f64>,
}

/// Filtering matrix `Phi = C B^-1` from a cross block and an observation
/// block.
///
/// The full 2x2 product is formed; no structural zeros are imposed, so the
/// same path serves exact and empirical inputs.
pub fn filter_matrix(cross: &CrossCov2, obs_block: &Cov2) -> Result<FilterMatrix, DmdError> {
    let inv = invert_cov2(obs_block)?;
    Ok(FilterMatrix {
        phi11: cross.c11 * inv.m11 + cross.c12 * inv.m12,
        phi12: cross.c11 * inv.m12 + cross.c12 * inv.m22,
        phi21: cross.c21 * inv.m11 + cross.c22 * inv.m12,
        phi22: cross.c21 * inv.m12 + cross.c22 * inv.m22,
    })
}

/// Optimal filter of a model built from its exact stationary covariances
/// in regression form.
///
/// Its second column is structurally zero and `phi21 = -V0 phi11`; its
/// mean-square error is described exactly by the closed-form error
/// matrix, for any noise correlation.
pub fn theoretical_filter_matrix(
    model: &SignalObservationModel,
) -> Result<FilterMatrix, DmdError> {
    let cross = CrossCov2::regression_form(
        steady_cross_cov(model),
        model.signal().v(),
        model.observation().v(),
    );
    filter_matrix(&cross, &block_beta(model.observation()))
}

/// Applies a filter matrix along an observation trajectory, producing the
/// estimate pair for each step `k = 0..T-1`.
pub fn apply_filter(
    phi: &FilterMatrix,
    beta_traj: &Trajectory,
) -> Result<FilteredEstimates, DmdError> {
    if beta_traj.values().len() < 2 {
        return Err(DmdError::TrajectoryTooShort {
            required: 2,
            got: beta_traj.values().len(),
        });
    }
    let t = beta_traj.steps();
    let mut alpha_hat = Vec::with_capacity(t);
    let mut d_alpha_hat = Vec::with_capacity(t);
    for k in 0..t {
        let b = beta_traj.values()[k];
        let db = beta_traj.increments()[k];
        alpha_hat.push(phi.phi11 * b + phi.phi12 * db);
        d_alpha_hat.push(phi.phi21 * b + phi.phi22 * db);
    }
    Ok(FilteredEstimates {
        alpha_hat,
        d_alpha_hat,
    })
}

/// Interpolates the signal as `alpha_hat(k) = phi11 * beta(k)` elementwise.
pub fn interpolate_signal(phi11: f64, beta_values: &[f64]) -> Vec<f64> {
    beta_values.iter().map(|&b| phi11 * b).collect()
}

/// Relative floor below which the gain ratio is considered indeterminate.
const DRIFT_RATIO_TOL: f64 = 1e-10;

/// Drift estimate `-phi21 / phi11`.
///
/// Fails when `|phi11|` is negligible relative to `|phi11| + |phi21|`,
/// which signals an uninformative observation (vanishing cross-covariance).
pub fn estimate_drift(phi: &FilterMatrix) -> Result<f64, DmdError> {
    let scale = phi.phi11.abs() + phi.phi21.abs();
    if phi.phi11.abs() <= DRIFT_RATIO_TOL * scale || scale == 0.0 {
        return Err(DmdError::IndeterminateRatio { phi11: phi.phi11 });
    }
    Ok(-phi.phi21 / phi.phi11)
}

/// Noise-variance estimate inverting the stationary law:
/// `sigma0^2 = (2 v0 - v0^2) R_alpha`. Returns the variance and its
/// square root.
pub fn estimate_noise_variance(v0_est: f64, r_alpha_est: f64) -> Result<(f64, f64), DmdError> {
    let eff = effective_factor(v0_est)?;
    if !r_alpha_est.is_finite() || r_alpha_est < 0.0 {
        return Err(DmdError::NegativeVariance(r_alpha_est));
    }
    let variance = eff * r_alpha_est;
    Ok((variance, variance.sqrt()))
}
