//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors raised by model validation, simulation, and estimation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DmdError {
    /// Drift outside the open interval (0, 2); the stationary variance
    /// would be undefined or negative.
    #[error("drift coefficient must lie strictly inside (0, 2), got {0}")]
    DriftOutOfRange(f64),

    /// Negative or non-finite noise intensity.
    #[error("noise intensity must be finite and non-negative, got {0}")]
    InvalidNoiseIntensity(f64),

    /// Noise cross-correlation outside [-1, 1].
    #[error("noise cross-correlation must lie in [-1, 1], got {0}")]
    CorrelationOutOfRange(f64),

    /// Equilibrium level outside the open interval (0, 1).
    #[error("equilibrium must lie strictly inside (0, 1), got {0}")]
    EquilibriumOutOfRange(f64),

    /// A relative frequency outside [0, 1].
    #[error("relative frequency must lie in [0, 1], got {0}")]
    FrequencyOutOfRange(f64),

    /// Empty sample where at least one observation is required.
    #[error("sample size must be at least 1")]
    EmptySample,

    /// Zero step count or otherwise too short a trajectory.
    #[error("trajectory must contain at least {required} states, got {got}")]
    TrajectoryTooShort { required: usize, got: usize },

    /// A fixed initial state must be finite.
    #[error("initial state must be finite, got {0}")]
    InvalidInitialState(f64),

    /// Stored increments disagree with consecutive state differences.
    #[error("increment at index {0} is inconsistent with the state sequence")]
    InconsistentIncrements(usize),

    /// Component trajectories of a pair have different lengths.
    #[error("paired trajectories must have equal length: {alpha} vs {beta}")]
    LengthMismatch { alpha: usize, beta: usize },

    /// Driving noise cannot be recovered from a noiseless process.
    #[error("driving noise is undefined for a noiseless process (sigma = 0)")]
    DegenerateNoise,

    /// Trajectory was stored without its driving noises.
    #[error("trajectory does not retain driving noises")]
    MissingNoises,

    /// 2x2 covariance block is numerically singular.
    #[error("covariance block is numerically singular (det = {det:.6e})")]
    SingularCovariance { det: f64 },

    /// The drift estimate phi21/phi11 has a negligible denominator.
    #[error("drift ratio is indeterminate: |phi11| = {phi11:.6e} is negligible")]
    IndeterminateRatio { phi11: f64 },

    /// A variance that must be strictly positive is not.
    #[error("variance must be strictly positive, got {0}")]
    NonPositiveVariance(f64),

    /// A variance estimate that must be non-negative is negative.
    #[error("variance estimate must be non-negative, got {0}")]
    NegativeVariance(f64),

    /// Squared correlation exceeded 1 beyond round-off; the covariance
    /// inputs cannot come from a joint distribution.
    #[error("squared correlation {0} exceeds 1 beyond tolerance; covariance inputs are inconsistent")]
    InconsistentCovariances(f64),

    /// Conditional covariance came out asymmetric beyond round-off.
    #[error("conditional covariance asymmetry {relative:.6e} exceeds tolerance")]
    AsymmetricCovariance { relative: f64 },

    /// Empirical covariance identities failed; trajectories, noises, and
    /// model parameters do not belong together.
    #[error("correction identity residual {residual:.6e} exceeds tolerance; trajectories do not match the model")]
    CorrectionIdentity { residual: f64 },

    /// Malformed CSV input.
    #[error("csv parse error at line {line}: {reason}")]
    CsvParse { line: usize, reason: String },
}
