//! Trajectories and seeded simulation of single and paired diffusions.
//!
//! Simulation is deterministic: identical `(params, steps, init, seed)`
//! produce bit-identical trajectories within one build. Driving noises are
//! retained alongside the states because the empirical correction terms
//! need them; call [`Trajectory::drop_noises`] to release the memory for
//! very long runs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::covariance::steady_cross_cov;
use crate::error::DmdError;
use crate::model::{stationary_variance, DmdParams, SignalObservationModel};

/// Initial state of a simulated trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Init {
    /// Draw the initial state from the exact stationary law.
    Stationary,
    /// Start from a fixed state.
    Fixed(f64),
}

/// One realized process path: states `x(0..=T)`, increments
/// `dx(k) = x(k+1) - x(k)` for `k = 0..T`, and optionally the driving
/// noises that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    values: Vec<f64>,
    increments: Vec<f64>,
    noises: Option<Vec<f64>>,
}

impl Trajectory {
    /// Builds a trajectory from raw parts, checking that the increments
    /// are exactly the consecutive state differences and the lengths are
    /// consistent.
    pub fn new(
        values: Vec<f64>,
        increments: Vec<f64>,
        noises: Option<Vec<f64>>,
    ) -> Result<Self, DmdError> {
        if values.len() < 2 {
            return Err(DmdError::TrajectoryTooShort {
                required: 2,
                got: values.len(),
            });
        }
        if increments.len() != values.len() - 1 {
            return Err(DmdError::LengthMismatch {
                alpha: values.len() - 1,
                beta: increments.len(),
            });
        }
        for (k, &d) in increments.iter().enumerate() {
            if d != values[k + 1] - values[k] {
                return Err(DmdError::InconsistentIncrements(k));
            }
        }
        if let Some(w) = &noises {
            if w.len() != increments.len() {
                return Err(DmdError::LengthMismatch {
                    alpha: increments.len(),
                    beta: w.len(),
                });
            }
        }
        Ok(Self {
            values,
            increments,
            noises,
        })
    }

    /// Builds a trajectory from states alone, deriving the increments.
    pub fn from_values(values: Vec<f64>) -> Result<Self, DmdError> {
        let increments = values.windows(2).map(|w| w[1] - w[0]).collect();
        Self::new(values, increments, None)
    }

    /// States `x(0..=T)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Increments `dx(k+1)`, one per step.
    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// Driving noises if retained.
    pub fn noises(&self) -> Option<&[f64]> {
        self.noises.as_deref()
    }

    /// Number of steps `T` (= number of increments).
    pub fn steps(&self) -> usize {
        self.increments.len()
    }

    /// Releases the stored driving noises.
    pub fn drop_noises(&mut self) {
        self.noises = None;
    }

    /// Discards the first `n` steps (burn-in), keeping at least one step.
    pub fn discard_prefix(&mut self, n: usize) -> Result<(), DmdError> {
        if n == 0 {
            return Ok(());
        }
        if self.steps() <= n {
            return Err(DmdError::TrajectoryTooShort {
                required: n + 2,
                got: self.values.len(),
            });
        }
        self.values.drain(..n);
        self.increments.drain(..n);
        if let Some(w) = &mut self.noises {
            w.drain(..n);
        }
        Ok(())
    }
}

/// Aligned signal/observation trajectories of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedTrajectory {
    alpha: Trajectory,
    beta: Trajectory,
}

impl PairedTrajectory {
    pub fn new(alpha: Trajectory, beta: Trajectory) -> Result<Self, DmdError> {
        if alpha.values.len() != beta.values.len() {
            return Err(DmdError::LengthMismatch {
                alpha: alpha.values.len(),
                beta: beta.values.len(),
            });
        }
        Ok(Self { alpha, beta })
    }

    /// Signal trajectory.
    pub fn alpha(&self) -> &Trajectory {
        &self.alpha
    }

    /// Observation trajectory.
    pub fn beta(&self) -> &Trajectory {
        &self.beta
    }

    /// Number of steps `T`.
    pub fn steps(&self) -> usize {
        self.alpha.steps()
    }

    /// Releases the stored driving noises of both components.
    pub fn drop_noises(&mut self) {
        self.alpha.drop_noises();
        self.beta.drop_noises();
    }
}

#[inline]
fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Simulates one diffusion for `steps` steps.
///
/// The update is `x(k+1) = x(k) + (sigma w(k+1) - V x(k))`; increments are
/// stored as the exact state differences. Stationary initialization draws
/// `x(0) ~ N(0, R)` from the exact stationary law, so no burn-in is
/// needed.
pub fn simulate_dmd(
    params: &DmdParams,
    steps: usize,
    init: Init,
    seed: u64,
) -> Result<Trajectory, DmdError> {
    if steps == 0 {
        return Err(DmdError::TrajectoryTooShort { required: 2, got: 1 });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let x0 = match init {
        Init::Stationary => stationary_variance(params).sqrt() * standard_normal(&mut rng),
        Init::Fixed(x0) => {
            if !x0.is_finite() {
                return Err(DmdError::InvalidInitialState(x0));
            }
            x0
        }
    };

    let v = params.v();
    let sigma = params.sigma();
    let mut values = Vec::with_capacity(steps + 1);
    let mut increments = Vec::with_capacity(steps);
    let mut noises = Vec::with_capacity(steps);
    values.push(x0);
    let mut x = x0;
    for _ in 0..steps {
        let w = standard_normal(&mut rng);
        let next = x + (sigma * w - v * x);
        increments.push(next - x);
        values.push(next);
        noises.push(w);
        x = next;
    }
    Ok(Trajectory {
        values,
        increments,
        noises: Some(noises),
    })
}

/// Simulates a signal/observation pair for `steps` steps.
///
/// Per step the noise pair `(w0, w)` is jointly standard normal with
/// correlation `rho_w`, built as `w = rho w0 + sqrt(1 - rho^2) z` with `z`
/// independent. The initial states are drawn from the exact joint
/// stationary law: variances `R_alpha`, `R_beta` and cross-covariance
/// [`steady_cross_cov`], factored as the law of `alpha(0)` times the
/// conditional law of `beta(0)`.
pub fn simulate_pair(
    model: &SignalObservationModel,
    steps: usize,
    seed: u64,
) -> Result<PairedTrajectory, DmdError> {
    if steps == 0 {
        return Err(DmdError::TrajectoryTooShort { required: 2, got: 1 });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    let r_alpha = stationary_variance(model.signal());
    let r_beta = stationary_variance(model.observation());
    let c = steady_cross_cov(model);

    let z1 = standard_normal(&mut rng);
    let z2 = standard_normal(&mut rng);
    let (a0, b0) = if r_alpha > 0.0 {
        let residual = (r_beta - c * c / r_alpha).max(0.0);
        (
            r_alpha.sqrt() * z1,
            c / r_alpha.sqrt() * z1 + residual.sqrt() * z2,
        )
    } else {
        (0.0, r_beta.sqrt() * z2)
    };

    let v0 = model.signal().v();
    let s0 = model.signal().sigma();
    let v = model.observation().v();
    let s = model.observation().sigma();
    let rho = model.rho_w();
    let mix = (1.0 - rho * rho).max(0.0).sqrt();

    let mut a_values = Vec::with_capacity(steps + 1);
    let mut a_increments = Vec::with_capacity(steps);
    let mut a_noises = Vec::with_capacity(steps);
    let mut b_values = Vec::with_capacity(steps + 1);
    let mut b_increments = Vec::with_capacity(steps);
    let mut b_noises = Vec::with_capacity(steps);
    a_values.push(a0);
    b_values.push(b0);

    let mut a = a0;
    let mut b = b0;
    for _ in 0..steps {
        let w0 = standard_normal(&mut rng);
        let z = standard_normal(&mut rng);
        let w = rho * w0 + mix * z;

        let a_next = a + (s0 * w0 - v0 * a);
        a_increments.push(a_next - a);
        a_values.push(a_next);
        a_noises.push(w0);
        a = a_next;

        let b_next = b + (s * w - v * b);
        b_increments.push(b_next - b);
        b_values.push(b_next);
        b_noises.push(w);
        b = b_next;
    }

    Ok(PairedTrajectory {
        alpha: Trajectory {
            values: a_values,
            increments: a_increments,
            noises: Some(a_noises),
        },
        beta: Trajectory {
            values: b_values,
            increments: b_increments,
            noises: Some(b_noises),
        },
    })
}

/// Recovers the driving noise sequence `w(k+1) = (dx(k+1) + V x(k)) / sigma`.
///
/// If the trajectory was simulated under the same parameters this matches
/// the stored noises to round-off.
pub fn reconstruct_noise(traj: &Trajectory, params: &DmdParams) -> Result<Vec<f64>, DmdError> {
    if params.sigma() == 0.0 {
        return Err(DmdError::DegenerateNoise);
    }
    if traj.values.len() < 2 {
        return Err(DmdError::TrajectoryTooShort {
            required: 2,
            got: traj.values.len(),
        });
    }
    let v = params.v();
    let sigma = params.sigma();
    Ok(traj
        .increments
        .iter()
        .zip(&traj.values)
        .map(|(&d, &x)| (d + v * x) / sigma)
        .collect())
}

/// Deterministic seed mix for parallel or repeated runs.
///
/// Derives an independent stream seed from `(master, stream, index)` by
/// three rounds of SplitMix64, so replicas can run in any order and still
/// reproduce bit-identically.
pub fn mix_seed(master: u64, stream: u64, index: u64) -> u64 {
    fn splitmix64(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E3779B97F4A7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
    splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index)
}
