//! Stationary Gaussian discrete Markov diffusions (DMD): seeded
//! simulation, closed-form one-step filtering, and parameter estimation
//! from empirical covariances.
//!
//! A DMD is the AR(1)-type sequence `x(k+1) = (1 - V) x(k) + sigma w(k+1)`
//! with iid standard normal innovations. The crate provides:
//!
//! - [`model`] / [`trajectory`]: parameters, the stationary law, exact
//!   stationary-start simulation of single processes and of correlated
//!   signal/observation pairs, and noise reconstruction;
//! - [`covariance`]: the closed-form 2x2 stationary covariance blocks and
//!   their inverses;
//! - [`filter`]: the optimal filtering matrix `Phi = C B^-1`, its
//!   application along trajectories, and the drift / noise-variance
//!   estimates it carries;
//! - [`filter_error`]: the filtering error covariance in closed form and
//!   by direct conditional-covariance evaluation;
//! - [`empirical`]: time-average sample moments, noise-correlation
//!   correction terms, and trajectory calibration;
//! - [`io`]: CSV and key=value serialization;
//! - [`stats`]: compensated summation and Monte Carlo summary helpers.

pub mod covariance;
pub mod empirical;
pub mod error;
pub mod filter;
pub mod filter_error;
pub mod io;
pub mod model;
pub mod stats;
pub mod trajectory;

pub use covariance::{
    block_alpha, block_beta, cross_block, invert_cov2, joint_cov_from_params, steady_cross_cov,
    Cov2, CrossCov2, JointCov,
};
pub use empirical::{
    assemble_blocks, calibrate, calibrate_from, calibration_filter_matrix,
    closed_form_filter_components, correction_addendum, correction_terms, empirical_covariances,
    sample_means, BlockMode, Calibration, Corrections, EmpiricalCov,
};
pub use error::DmdError;
pub use filter::{
    apply_filter, estimate_drift, estimate_noise_variance, filter_matrix, interpolate_signal,
    theoretical_filter_matrix, FilterMatrix, FilteredEstimates,
};
pub use filter_error::{
    error_matrix, error_matrix_from_blocks, error_trace, gamma_coefficient, theoretical_error_matrix,
    theoretical_gamma, ErrorMatrix, GammaCoefficient,
};
pub use model::{
    effective_factor, normalized_fluctuations, stationary_variance, DmdParams,
    SignalObservationModel, StationaryLaw,
};
pub use trajectory::{
    mix_seed, reconstruct_noise, simulate_dmd, simulate_pair, Init, PairedTrajectory, Trajectory,
};
