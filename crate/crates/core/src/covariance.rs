//! Closed-form stationary covariance blocks of single and paired
//! diffusions, and their 2x2 inverses.
//!
//! For one stationary process the joint second moments of
//! `(x(k), dx(k+1))` follow from the regression structure:
//! `E[x dx] = -V R` and `E[dx^2] = 2 V R`. For a signal/observation pair
//! the analogous cross moments scale with the steady cross-covariance
//! `R_ab = E[alpha(k) beta(k)]`; only `E[d_alpha d_beta]` picks up an
//! extra `sigma0 sigma rho_w` term when the driving noises are
//! correlated.

use crate::error::DmdError;
use crate::model::{stationary_variance, DmdParams, SignalObservationModel};

/// Relative determinant floor below which a 2x2 block is treated as
/// singular.
pub const SINGULARITY_TOL: f64 = 1e-12;

/// Joint second moments of `(x(k), dx(k+1))` for one process:
/// `r = E[x^2]`, `r0 = E[x dx]`, `r_delta = E[dx^2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointCov {
    pub r: f64,
    pub r0: f64,
    pub r_delta: f64,
}

/// Symmetric 2x2 covariance block, stored as its lower triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cov2 {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
}

impl Cov2 {
    pub const IDENTITY: Self = Self {
        m11: 1.0,
        m12: 0.0,
        m22: 1.0,
    };

    pub fn new(m11: f64, m12: f64, m22: f64) -> Self {
        Self { m11, m12, m22 }
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }
}

/// General 2x2 cross-covariance block between `(alpha, d_alpha)` and
/// `(beta, d_beta)`:
/// `c11 = E[alpha beta]`, `c12 = E[alpha d_beta]`,
/// `c21 = E[beta d_alpha]`, `c22 = E[d_alpha d_beta]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCov2 {
    pub c11: f64,
    pub c12: f64,
    pub c21: f64,
    pub c22: f64,
}

impl CrossCov2 {
    pub fn new(c11: f64, c12: f64, c21: f64, c22: f64) -> Self {
        Self { c11, c12, c21, c22 }
    }

    /// Cross block implied by the regression structure alone, for a given
    /// cross-covariance level `r_ab`:
    ///
    /// ```text
    /// [ r_ab        -V r_ab    ]
    /// [ -V0 r_ab    V V0 r_ab  ]
    /// ```
    ///
    /// This ignores any contemporaneous noise correlation; it is the form
    /// under which the optimal filter has its structural zeros, and the
    /// form used by the closed-form error matrix.
    pub fn regression_form(r_ab: f64, v0: f64, v: f64) -> Self {
        Self {
            c11: r_ab,
            c12: -v * r_ab,
            c21: -v0 * r_ab,
            c22: v * v0 * r_ab,
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            c11: self.c11,
            c12: self.c21,
            c21: self.c12,
            c22: self.c22,
        }
    }
}

/// Joint second moments of one stationary process.
pub fn joint_cov_from_params(params: &DmdParams) -> JointCov {
    let r = stationary_variance(params);
    let v = params.v();
    JointCov {
        r,
        r0: -v * r,
        r_delta: 2.0 * v * r,
    }
}

/// Stationary covariance block of the observation pair
/// `(beta(k), d_beta(k+1))`.
pub fn block_beta(params: &DmdParams) -> Cov2 {
    let jc = joint_cov_from_params(params);
    Cov2::new(jc.r, jc.r0, jc.r_delta)
}

/// Stationary covariance block of the signal pair
/// `(alpha(k), d_alpha(k+1))`; same structure as [`block_beta`] with the
/// signal parameters.
pub fn block_alpha(model: &SignalObservationModel) -> Cov2 {
    block_beta(model.signal())
}

/// Exact inverse of a symmetric 2x2 block.
///
/// Rejects blocks whose determinant is at or below
/// `SINGULARITY_TOL * m11^2` (scale-free), which signals a degenerate
/// process such as `sigma = 0`.
pub fn invert_cov2(m: &Cov2) -> Result<Cov2, DmdError> {
    let det = m.det();
    if det <= SINGULARITY_TOL * m.m11 * m.m11 {
        return Err(DmdError::SingularCovariance { det });
    }
    Ok(Cov2::new(m.m22 / det, -m.m12 / det, m.m11 / det))
}

/// Steady-state cross-covariance `E[alpha(k) beta(k)]` of the pair.
///
/// It is the unique fixed point of
/// `E[a(k+1) b(k+1)] = (1 - V0)(1 - V) E[a(k) b(k)] + sigma0 sigma rho_w`,
/// namely `sigma0 sigma rho_w / (V0 + V - V0 V)`; the denominator is
/// strictly positive on the admissible drift range.
pub fn steady_cross_cov(model: &SignalObservationModel) -> f64 {
    let v0 = model.signal().v();
    let v = model.observation().v();
    let coupling = model.signal().sigma() * model.observation().sigma() * model.rho_w();
    coupling / (v0 + v - v0 * v)
}

/// Stationary cross-covariance block of the pair, including the
/// noise-correlation term.
///
/// With `c = steady_cross_cov(model)` the entries are
/// `c11 = c`, `c12 = -V c`, `c21 = -V0 c`, and
/// `c22 = V V0 c + sigma0 sigma rho_w`; the last term vanishes for
/// uncorrelated noises, recovering the pure regression form.
pub fn cross_block(model: &SignalObservationModel) -> CrossCov2 {
    let c = steady_cross_cov(model);
    let v0 = model.signal().v();
    let v = model.observation().v();
    let coupling = model.signal().sigma() * model.observation().sigma() * model.rho_w();
    CrossCov2 {
        c11: c,
        c12: -v * c,
        c21: -v0 * c,
        c22: v * v0 * c + coupling,
    }
}
