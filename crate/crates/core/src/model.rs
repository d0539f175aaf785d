//! Process parameters and the stationary law.
//!
//! A discrete Markov diffusion (DMD) is the Gaussian AR(1)-type sequence
//! driven by the difference equation
//!
//! ```text
//! delta(k+1) = -V * x(k) + sigma * w(k+1),      w ~ iid N(0, 1),
//! ```
//!
//! i.e. `x(k+1) = (1 - V) x(k) + sigma w(k+1)`. For `0 < V < 2` the process
//! has a unique stationary law: zero mean and variance
//! `R = sigma^2 / (2V - V^2)`.

use crate::error::DmdError;

/// Returns the effective factor `2V - V^2` that links noise variance to
/// stationary variance via `sigma^2 = (2V - V^2) R`.
///
/// The factor is strictly positive on the admissible drift range and peaks
/// at 1 for `V = 1`; the endpoints 0 and 2 are rejected because every
/// stationary formula divides by it.
pub fn effective_factor(v: f64) -> Result<f64, DmdError> {
    if !v.is_finite() || v <= 0.0 || v >= 2.0 {
        return Err(DmdError::DriftOutOfRange(v));
    }
    Ok(v * (2.0 - v))
}

/// Drift and noise intensity of one discrete Markov diffusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmdParams {
    v: f64,
    sigma: f64,
}

impl DmdParams {
    /// Validates `0 < v < 2` and `sigma >= 0`.
    pub fn new(v: f64, sigma: f64) -> Result<Self, DmdError> {
        effective_factor(v)?;
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(DmdError::InvalidNoiseIntensity(sigma));
        }
        Ok(Self { v, sigma })
    }

    /// Drift coefficient (regression rate per step).
    pub fn v(&self) -> f64 {
        self.v
    }

    /// Noise intensity (per-step standard deviation units).
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Effective factor `2V - V^2` of this process.
    pub fn eff_factor(&self) -> f64 {
        self.v * (2.0 - self.v)
    }

    /// Stationary law of this process.
    pub fn stationary_law(&self) -> StationaryLaw {
        StationaryLaw::of(self)
    }
}

/// Returns the stationary variance `sigma^2 / (2V - V^2)`.
pub fn stationary_variance(params: &DmdParams) -> f64 {
    params.sigma * params.sigma / params.eff_factor()
}

/// Zero-mean stationary law of a DMD: its variance and effective factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryLaw {
    /// Stationary variance `R`.
    pub variance: f64,
    /// Effective factor `2V - V^2`, in (0, 1].
    pub eff_factor: f64,
}

impl StationaryLaw {
    /// Stationary law implied by the given parameters.
    pub fn of(params: &DmdParams) -> Self {
        Self {
            variance: stationary_variance(params),
            eff_factor: params.eff_factor(),
        }
    }
}

/// Signal/observation model: two DMDs whose driving noises may be
/// correlated per step.
///
/// `rho_w` is the correlation of the contemporaneous noise pair; lagged
/// noises stay independent. The coupling it induces is what makes the
/// observation informative about the signal in the stationary regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalObservationModel {
    signal: DmdParams,
    observation: DmdParams,
    rho_w: f64,
}

impl SignalObservationModel {
    /// Validates both parameter sets and `-1 <= rho_w <= 1`.
    pub fn new(
        signal: DmdParams,
        observation: DmdParams,
        rho_w: f64,
    ) -> Result<Self, DmdError> {
        if !rho_w.is_finite() || !(-1.0..=1.0).contains(&rho_w) {
            return Err(DmdError::CorrelationOutOfRange(rho_w));
        }
        Ok(Self {
            signal,
            observation,
            rho_w,
        })
    }

    /// Builds a model from raw scalars `(v0, sigma0, v, sigma, rho_w)`.
    pub fn from_raw(
        v0: f64,
        sigma0: f64,
        v: f64,
        sigma: f64,
        rho_w: f64,
    ) -> Result<Self, DmdError> {
        Self::new(DmdParams::new(v0, sigma0)?, DmdParams::new(v, sigma)?, rho_w)
    }

    /// Signal parameters `(V0, sigma0)`.
    pub fn signal(&self) -> &DmdParams {
        &self.signal
    }

    /// Observation parameters `(V, sigma)`.
    pub fn observation(&self) -> &DmdParams {
        &self.observation
    }

    /// Per-step correlation of the signal and observation noises.
    pub fn rho_w(&self) -> f64 {
        self.rho_w
    }

    /// Same model with the noise correlation replaced.
    pub fn with_rho_w(&self, rho_w: f64) -> Result<Self, DmdError> {
        Self::new(self.signal, self.observation, rho_w)
    }
}

/// Normalized fluctuations `sqrt(N) * (S_N(k) - rho)` of a relative
/// frequency sequence around its equilibrium `rho`.
pub fn normalized_fluctuations(
    frequencies: &[f64],
    rho: f64,
    n: usize,
) -> Result<Vec<f64>, DmdError> {
    if n == 0 {
        return Err(DmdError::EmptySample);
    }
    if !rho.is_finite() || rho <= 0.0 || rho >= 1.0 {
        return Err(DmdError::EquilibriumOutOfRange(rho));
    }
    for &s in frequencies {
        if !s.is_finite() || !(0.0..=1.0).contains(&s) {
            return Err(DmdError::FrequencyOutOfRange(s));
        }
    }
    let scale = (n as f64).sqrt();
    Ok(frequencies.iter().map(|&s| scale * (s - rho)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn effective_factor_values() {
        assert_abs_diff_eq!(effective_factor(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(effective_factor(0.5).unwrap(), 0.75);
        assert!(matches!(
            effective_factor(2.0),
            Err(DmdError::DriftOutOfRange(_))
        ));
        assert!(matches!(
            effective_factor(0.0),
            Err(DmdError::DriftOutOfRange(_))
        ));
        assert!(matches!(
            effective_factor(-0.3),
            Err(DmdError::DriftOutOfRange(_))
        ));
    }

    #[test]
    fn stationary_variance_values() {
        let p = DmdParams::new(1.0, 2.0).unwrap();
        assert_abs_diff_eq!(stationary_variance(&p), 4.0);

        let p = DmdParams::new(0.5, 1.0).unwrap();
        assert_abs_diff_eq!(stationary_variance(&p), 4.0 / 3.0, epsilon = 1e-15);

        let p = DmdParams::new(0.5, 0.0).unwrap();
        assert_abs_diff_eq!(stationary_variance(&p), 0.0);
    }

    #[test]
    fn params_validation() {
        assert!(DmdParams::new(0.5, -1.0).is_err());
        assert!(DmdParams::new(f64::NAN, 1.0).is_err());
        assert!(DmdParams::new(0.5, f64::INFINITY).is_err());
        assert!(DmdParams::new(1.999, 0.0).is_ok());
    }

    #[test]
    fn stationary_law_fields() {
        let p = DmdParams::new(0.5, 1.0).unwrap();
        let law = p.stationary_law();
        assert_abs_diff_eq!(law.eff_factor, 0.75);
        assert_abs_diff_eq!(law.variance, 4.0 / 3.0, epsilon = 1e-15);
        assert!(law.eff_factor > 0.0 && law.eff_factor <= 1.0);
    }

    #[test]
    fn model_validation() {
        let p = DmdParams::new(0.5, 1.0).unwrap();
        assert!(SignalObservationModel::new(p, p, 1.5).is_err());
        assert!(SignalObservationModel::new(p, p, -1.0).is_ok());
        assert!(SignalObservationModel::from_raw(0.4, 1.0, 0.5, 1.0, 0.6).is_ok());
    }

    #[test]
    fn fluctuations_at_equilibrium_vanish() {
        let out = normalized_fluctuations(&[0.5, 0.5, 0.5], 0.5, 400).unwrap();
        assert!(out.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn fluctuations_direct_arithmetic() {
        let out = normalized_fluctuations(&[0.6], 0.5, 100).unwrap();
        assert_abs_diff_eq!(out[0], 1.0, epsilon = 1e-15);

        let out = normalized_fluctuations(&[1.0], 0.5, 1).unwrap();
        assert_abs_diff_eq!(out[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn fluctuations_domain_errors() {
        assert!(matches!(
            normalized_fluctuations(&[0.5], 1.0, 10),
            Err(DmdError::EquilibriumOutOfRange(_))
        ));
        assert!(matches!(
            normalized_fluctuations(&[1.2], 0.5, 10),
            Err(DmdError::FrequencyOutOfRange(_))
        ));
        assert!(matches!(
            normalized_fluctuations(&[0.5], 0.5, 0),
            Err(DmdError::EmptySample)
        ));
    }
}
