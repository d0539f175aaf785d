//! Monte Carlo studies: consistency of the calibration estimates, error
//! matrix validation, correction-term sweeps over the noise correlation,
//! and stationarity checks.
//!
//! Studies are self-judging: every tolerance is pinned here (z-scores
//! below 5, the correction slope within 10% of `sigma sigma0`, median
//! estimate errors shrinking at least 3x over a 100x horizon span), and
//! each run returns per-replica records plus a pass/fail summary.
//!
//! Replicas are independent; their seeds derive from
//! `mix_seed(master_seed, horizon, replica)` only, so any execution order
//! produces the identical record set.

use std::time::Instant;

use dmd_filter::empirical::{calibrate_from, correction_terms, empirical_covariances};
use dmd_filter::error::DmdError;
use dmd_filter::filter::{apply_filter, theoretical_filter_matrix};
use dmd_filter::filter_error::{theoretical_error_matrix, theoretical_gamma, ErrorMatrix};
use dmd_filter::model::SignalObservationModel;
use dmd_filter::stats::{batch_means_se, linear_fit, mean, median, sample_variance};
use dmd_filter::trajectory::{mix_seed, simulate_pair};

use crate::config::{ExperimentConfig, StudyKind};
use crate::record::{sort_records, StudyRecord};

/// Replica z-scores must stay below this many standard errors.
pub const Z_TOL: f64 = 5.0;
/// The fitted correction slope must be within this relative tolerance of
/// `sigma * sigma0`.
pub const SLOPE_REL_TOL: f64 = 0.1;
/// Median estimate errors must shrink at least this factor across a
/// [`CONSISTENCY_SPAN`]-fold horizon increase.
pub const CONSISTENCY_IMPROVEMENT: f64 = 3.0;
/// Horizon span (largest / smallest) above which the improvement factor
/// is enforced.
pub const CONSISTENCY_SPAN: f64 = 100.0;
/// A replica's empirical coupling must exceed this many standard errors
/// to calibrate; below it the drift ratio is noise over noise.
pub const COUPLING_Z: f64 = 3.0;

/// Pass/fail summary of one study run.
#[derive(Debug, Clone)]
pub struct StudySummary {
    pub lines: Vec<String>,
    pub passed: bool,
}

/// Records plus summary.
#[derive(Debug, Clone)]
pub struct StudyOutput {
    pub records: Vec<StudyRecord>,
    pub summary: StudySummary,
}

struct Checks {
    lines: Vec<String>,
    passed: bool,
}

impl Checks {
    fn new() -> Self {
        Self {
            lines: Vec::new(),
            passed: true,
        }
    }

    fn info(&mut self, line: String) {
        self.lines.push(line);
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        self.passed &= ok;
        let verdict = if ok { "PASS" } else { "FAIL" };
        self.lines.push(format!("check {name}: {verdict} ({detail})"));
    }

    fn into_summary(self) -> StudySummary {
        StudySummary {
            lines: self.lines,
            passed: self.passed,
        }
    }
}

fn batches_for(t: usize) -> usize {
    (t / 50).clamp(2, 1000)
}

/// Unbiased standard error of the mean across replicate values.
fn replica_se(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::INFINITY;
    }
    (sample_variance(xs) * n as f64 / (n as f64 - 1.0) / n as f64).sqrt()
}

/// Runs the study selected by the configuration.
pub fn run_study(cfg: &ExperimentConfig) -> StudyOutput {
    match &cfg.study {
        StudyKind::Consistency => run_consistency_study(cfg),
        StudyKind::ErrorValidation => run_error_validation(cfg),
        StudyKind::CorrelationSweep { rho_grid } => run_correlation_sweep(cfg, rho_grid),
        StudyKind::StationarityCheck => run_stationarity_check(cfg),
    }
}

/// One consistency replica: simulate a pair, calibrate, record the drift
/// and noise estimates.
///
/// A replica whose empirical coupling `r_ab` is statistically
/// indistinguishable from zero is recorded as failed instead of
/// producing a noise-over-noise drift ratio; with uncorrelated driving
/// noises this is the expected outcome for almost all replicas.
pub fn consistency_replica(
    model: &SignalObservationModel,
    horizon: usize,
    replica: u64,
    master_seed: u64,
) -> StudyRecord {
    let seed = mix_seed(master_seed, horizon as u64, replica);
    let mut record = StudyRecord::blank("consistency", model, horizon, replica, seed);
    let start = Instant::now();

    let outcome = (|| -> Result<(), DmdError> {
        let pair = simulate_pair(model, horizon, seed)?;
        let emp = empirical_covariances(&pair)?;
        let se_rab = (emp.r_a.max(0.0) * emp.r_b.max(0.0) / horizon as f64).sqrt();
        if emp.r_ab.abs() < COUPLING_Z * se_rab {
            return Err(DmdError::IndeterminateRatio { phi11: emp.r_ab });
        }
        let cal = calibrate_from(&emp)?;
        record.v0_hat = Some(cal.v0_hat);
        record.sigma0_sq_hat = Some(cal.sigma0_sq_hat);
        record.sigma0_hat = Some(cal.sigma0_hat);
        record.r_alpha_hat = Some(cal.r_alpha_hat);
        record.phi11 = Some(cal.filter.phi11);
        record.phi12 = Some(cal.filter.phi12);
        record.phi21 = Some(cal.filter.phi21);
        record.phi22 = Some(cal.filter.phi22);
        Ok(())
    })();
    if let Err(e) = outcome {
        record.failure = Some(e.to_string());
    }
    record.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    record
}

/// Consistency study: replicated calibration across horizons, judged by
/// shrinking median absolute errors of the drift and noise-variance
/// estimates.
pub fn run_consistency_study(cfg: &ExperimentConfig) -> StudyOutput {
    let mut records = Vec::new();
    for &t in &cfg.horizons {
        for r in 0..cfg.replicas as u64 {
            records.push(consistency_replica(&cfg.model, t, r, cfg.master_seed));
        }
    }
    sort_records(&mut records);

    let v0_true = cfg.model.signal().v();
    let s0_sq_true = cfg.model.signal().sigma().powi(2);
    let mut checks = Checks::new();
    let mut med_v0 = Vec::new();
    let mut med_s2 = Vec::new();
    for &t in &cfg.horizons {
        let ok: Vec<&StudyRecord> = records
            .iter()
            .filter(|r| r.horizon == t as u64 && r.failure.is_none())
            .collect();
        let failed = cfg.replicas - ok.len();
        if ok.is_empty() {
            checks.check(
                &format!("consistency-calibrated-replicas-T{t}"),
                false,
                format!("all {} replicas failed", cfg.replicas),
            );
            continue;
        }
        let v0_errs: Vec<f64> = ok.iter().map(|r| (r.v0_hat.unwrap() - v0_true).abs()).collect();
        let s2_errs: Vec<f64> = ok
            .iter()
            .map(|r| (r.sigma0_sq_hat.unwrap() - s0_sq_true).abs())
            .collect();
        let m_v0 = median(&v0_errs);
        let m_s2 = median(&s2_errs);
        checks.info(format!(
            "T = {t}: {} calibrated / {failed} failed, median |v0_hat - v0| = {m_v0:.6}, \
             median |sigma0_sq_hat - sigma0^2| = {m_s2:.6}, mean v0_hat = {:.6}, sd = {:.6}",
            ok.len(),
            mean(&ok.iter().map(|r| r.v0_hat.unwrap()).collect::<Vec<_>>()),
            sample_variance(&ok.iter().map(|r| r.v0_hat.unwrap()).collect::<Vec<_>>()).sqrt(),
        ));
        med_v0.push(m_v0);
        med_s2.push(m_s2);
    }

    if med_v0.len() == cfg.horizons.len() && med_v0.len() >= 2 {
        let dec_v0 = med_v0.windows(2).all(|w| w[1] < w[0]);
        let dec_s2 = med_s2.windows(2).all(|w| w[1] < w[0]);
        checks.check(
            "consistency-median-decreasing-v0",
            dec_v0,
            format!("medians {med_v0:?}"),
        );
        checks.check(
            "consistency-median-decreasing-sigma0_sq",
            dec_s2,
            format!("medians {med_s2:?}"),
        );

        let span = *cfg.horizons.last().unwrap() as f64 / cfg.horizons[0] as f64;
        if span >= CONSISTENCY_SPAN {
            let first = med_v0[0];
            let last = *med_v0.last().unwrap();
            checks.check(
                "consistency-improvement-v0",
                first >= CONSISTENCY_IMPROVEMENT * last,
                format!("{first:.6} vs {CONSISTENCY_IMPROVEMENT} x {last:.6}"),
            );
            let first = med_s2[0];
            let last = *med_s2.last().unwrap();
            checks.check(
                "consistency-improvement-sigma0_sq",
                first >= CONSISTENCY_IMPROVEMENT * last,
                format!("{first:.6} vs {CONSISTENCY_IMPROVEMENT} x {last:.6}"),
            );
        }
    }

    StudyOutput {
        records,
        summary: checks.into_summary(),
    }
}

/// Closed-form versus Monte Carlo error comparison for one replica.
#[derive(Debug, Clone, Copy)]
pub struct ErrorComparison {
    pub theory: ErrorMatrix,
    pub mc_g11: f64,
    pub mc_g12: f64,
    pub mc_g22: f64,
    pub z_g11: f64,
    pub z_g12: f64,
    pub z_g22: f64,
    pub gamma: f64,
    pub empirical_gamma: f64,
}

/// Simulates one pair, filters it with the exact-theory matrix, and
/// compares the realized mean-square error matrix to the closed form.
pub fn error_comparison(
    model: &SignalObservationModel,
    horizon: usize,
    seed: u64,
) -> Result<ErrorComparison, DmdError> {
    let pair = simulate_pair(model, horizon, seed)?;
    let phi = theoretical_filter_matrix(model)?;
    let est = apply_filter(&phi, pair.beta())?;
    let a = pair.alpha().values();
    let da = pair.alpha().increments();

    let t = horizon;
    let mut e1sq = Vec::with_capacity(t);
    let mut e1e2 = Vec::with_capacity(t);
    let mut e2sq = Vec::with_capacity(t);
    for k in 0..t {
        let e1 = a[k] - est.alpha_hat[k];
        let e2 = da[k] - est.d_alpha_hat[k];
        e1sq.push(e1 * e1);
        e1e2.push(e1 * e2);
        e2sq.push(e2 * e2);
    }
    let b = batches_for(t);
    let (m11, se11) = (mean(&e1sq), batch_means_se(&e1sq, b));
    let (m12, se12) = (mean(&e1e2), batch_means_se(&e1e2, b));
    let (m22, se22) = (mean(&e2sq), batch_means_se(&e2sq, b));

    let theory = theoretical_error_matrix(model)?;
    let emp = empirical_covariances(&pair)?;
    let empirical_gamma = emp.r_ab * emp.r_ab / (emp.r_a * emp.r_b);
    Ok(ErrorComparison {
        theory,
        mc_g11: m11,
        mc_g12: m12,
        mc_g22: m22,
        z_g11: (m11 - theory.g11) / se11,
        z_g12: (m12 - theory.g12) / se12,
        z_g22: (m22 - theory.g22) / se22,
        gamma: theoretical_gamma(model)?.value(),
        empirical_gamma,
    })
}

/// One error-validation replica.
pub fn error_validation_replica(
    model: &SignalObservationModel,
    horizon: usize,
    replica: u64,
    master_seed: u64,
) -> StudyRecord {
    let seed = mix_seed(master_seed, horizon as u64, replica);
    let mut record = StudyRecord::blank("error_validation", model, horizon, replica, seed);
    let start = Instant::now();
    match error_comparison(model, horizon, seed) {
        Ok(cmp) => {
            record.g11_theory = Some(cmp.theory.g11);
            record.g12_theory = Some(cmp.theory.g12);
            record.g22_theory = Some(cmp.theory.g22);
            record.g11_mc = Some(cmp.mc_g11);
            record.g12_mc = Some(cmp.mc_g12);
            record.g22_mc = Some(cmp.mc_g22);
            record.z_g11 = Some(cmp.z_g11);
            record.z_g12 = Some(cmp.z_g12);
            record.z_g22 = Some(cmp.z_g22);
        }
        Err(e) => record.failure = Some(e.to_string()),
    }
    record.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    record
}

/// Error-validation study: every entrywise z-score must stay below
/// [`Z_TOL`].
pub fn run_error_validation(cfg: &ExperimentConfig) -> StudyOutput {
    let mut records = Vec::new();
    for &t in &cfg.horizons {
        for r in 0..cfg.replicas as u64 {
            records.push(error_validation_replica(&cfg.model, t, r, cfg.master_seed));
        }
    }
    sort_records(&mut records);

    let mut checks = Checks::new();
    let mut worst: f64 = 0.0;
    let mut failed = 0usize;
    for rec in &records {
        if rec.failure.is_some() {
            failed += 1;
            continue;
        }
        for z in [rec.z_g11, rec.z_g12, rec.z_g22] {
            worst = worst.max(z.unwrap().abs());
        }
    }
    for rec in records.iter().filter(|r| r.failure.is_none()).take(1) {
        checks.info(format!(
            "T = {}: theory (g11, g12, g22) = ({:.6}, {:.6}, {:.6}), mc = ({:.6}, {:.6}, {:.6})",
            rec.horizon,
            rec.g11_theory.unwrap(),
            rec.g12_theory.unwrap(),
            rec.g22_theory.unwrap(),
            rec.g11_mc.unwrap(),
            rec.g12_mc.unwrap(),
            rec.g22_mc.unwrap(),
        ));
    }
    checks.check(
        "error-validation-no-failures",
        failed == 0,
        format!("{failed} failed replicas"),
    );
    checks.check(
        "error-validation-z-scores",
        worst < Z_TOL,
        format!("max |z| = {worst:.3} vs {Z_TOL}"),
    );

    StudyOutput {
        records,
        summary: checks.into_summary(),
    }
}

/// One correlation-sweep replica at a given grid point.
pub fn sweep_replica(
    model: &SignalObservationModel,
    horizon: usize,
    replica: u64,
    master_seed: u64,
) -> StudyRecord {
    // The seed depends only on (master, horizon, replica): grid points
    // share noise streams (common random numbers across the grid).
    let seed = mix_seed(master_seed, horizon as u64, replica);
    let mut record = StudyRecord::blank("correlation_sweep", model, horizon, replica, seed);
    let start = Instant::now();
    let outcome = (|| -> Result<(), DmdError> {
        let pair = simulate_pair(model, horizon, seed)?;
        let corr = correction_terms(&pair, model)?;
        record.a_t = Some(corr.a_t);
        record.b_t = Some(corr.b_t);
        record.c_t = Some(corr.c_t);
        Ok(())
    })();
    if let Err(e) = outcome {
        record.failure = Some(e.to_string());
    }
    record.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    record
}

/// Correlation sweep: correction-term means across the grid, judged by
/// the fitted `mean(c_t)` slope against `sigma sigma0`, vanishing means
/// at `rho = 0`, and antisymmetry of `mean(c_t)` in `rho`.
pub fn run_correlation_sweep(cfg: &ExperimentConfig, rho_grid: &[f64]) -> StudyOutput {
    let mut records = Vec::new();
    let mut checks = Checks::new();

    for &t in &cfg.horizons {
        let mut means_a = Vec::new();
        let mut means_b = Vec::new();
        let mut means_c = Vec::new();
        let mut ses = Vec::new();
        for &rho in rho_grid {
            let model = match cfg.model.with_rho_w(rho) {
                Ok(m) => m,
                Err(e) => {
                    checks.check(
                        &format!("sweep-grid-point-rho{rho}"),
                        false,
                        e.to_string(),
                    );
                    continue;
                }
            };
            let mut a = Vec::new();
            let mut b = Vec::new();
            let mut c = Vec::new();
            for r in 0..cfg.replicas as u64 {
                let rec = sweep_replica(&model, t, r, cfg.master_seed);
                if rec.failure.is_none() {
                    a.push(rec.a_t.unwrap());
                    b.push(rec.b_t.unwrap());
                    c.push(rec.c_t.unwrap());
                }
                records.push(rec);
            }
            let (ma, mb, mc) = (mean(&a), mean(&b), mean(&c));
            let (sa, sb, sc) = (replica_se(&a), replica_se(&b), replica_se(&c));
            checks.info(format!(
                "T = {t}, rho = {rho}: mean a_t = {ma:.6} (se {sa:.6}), \
                 mean b_t = {mb:.6} (se {sb:.6}), mean c_t = {mc:.6} (se {sc:.6})"
            ));
            means_a.push(ma);
            means_b.push(mb);
            means_c.push(mc);
            ses.push((sa, sb, sc));

            if rho == 0.0 {
                let ok = ma.abs() < Z_TOL * sa && mb.abs() < Z_TOL * sb && mc.abs() < Z_TOL * sc;
                checks.check(
                    &format!("sweep-zero-point-T{t}"),
                    ok,
                    format!("means ({ma:.6}, {mb:.6}, {mc:.6})"),
                );
            }
        }

        if rho_grid.len() >= 2 {
            let coupling = cfg.model.signal().sigma() * cfg.model.observation().sigma();
            let (slope, _) = linear_fit(rho_grid, &means_c);
            checks.check(
                &format!("sweep-slope-T{t}"),
                (slope - coupling).abs() <= SLOPE_REL_TOL * coupling,
                format!("slope {slope:.6} vs sigma*sigma0 = {coupling:.6} +/- {SLOPE_REL_TOL:.0e} rel"),
            );
        }

        // Antisymmetry of mean(c_t) for +/- grid pairs.
        for (i, &rho) in rho_grid.iter().enumerate() {
            if rho <= 0.0 {
                continue;
            }
            if let Some(j) = rho_grid.iter().position(|&r| (r + rho).abs() < 1e-12) {
                let sum = means_c[i] + means_c[j];
                let se = (ses[i].2.powi(2) + ses[j].2.powi(2)).sqrt();
                checks.check(
                    &format!("sweep-antisymmetry-T{t}-rho{rho}"),
                    sum.abs() < Z_TOL * se,
                    format!("mean_c({rho}) + mean_c({}) = {sum:.6}", -rho),
                );
            }
        }
    }

    sort_records(&mut records);
    StudyOutput {
        records,
        summary: checks.into_summary(),
    }
}

/// One stationarity replica: compares the state second moment over the
/// first and second halves of each component.
pub fn stationarity_replica(
    model: &SignalObservationModel,
    horizon: usize,
    replica: u64,
    master_seed: u64,
) -> StudyRecord {
    let seed = mix_seed(master_seed, horizon as u64, replica);
    let mut record = StudyRecord::blank("stationarity_check", model, horizon, replica, seed);
    let start = Instant::now();
    let outcome = (|| -> Result<(), DmdError> {
        let pair = simulate_pair(model, horizon, seed)?;
        let half = horizon / 2;
        let window = |xs: &[f64], from: usize, to: usize| -> (f64, f64) {
            let squares: Vec<f64> = xs[from..to].iter().map(|x| x * x).collect();
            (mean(&squares), batch_means_se(&squares, batches_for(to - from)))
        };
        let (v1a, se1a) = window(pair.alpha().values(), 0, half);
        let (v2a, se2a) = window(pair.alpha().values(), half, horizon);
        let (v1b, se1b) = window(pair.beta().values(), 0, half);
        let (v2b, se2b) = window(pair.beta().values(), half, horizon);
        record.var_alpha_first = Some(v1a);
        record.var_alpha_second = Some(v2a);
        record.z_alpha = Some((v1a - v2a) / (se1a.powi(2) + se2a.powi(2)).sqrt());
        record.var_beta_first = Some(v1b);
        record.var_beta_second = Some(v2b);
        record.z_beta = Some((v1b - v2b) / (se1b.powi(2) + se2b.powi(2)).sqrt());
        Ok(())
    })();
    if let Err(e) = outcome {
        record.failure = Some(e.to_string());
    }
    record.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    record
}

/// Stationarity study: window variances of stationary-start trajectories
/// must agree within [`Z_TOL`] standard errors.
pub fn run_stationarity_check(cfg: &ExperimentConfig) -> StudyOutput {
    let mut records = Vec::new();
    for &t in &cfg.horizons {
        for r in 0..cfg.replicas as u64 {
            records.push(stationarity_replica(&cfg.model, t, r, cfg.master_seed));
        }
    }
    sort_records(&mut records);

    let mut checks = Checks::new();
    let mut worst: f64 = 0.0;
    let mut failed = 0usize;
    for rec in &records {
        match (&rec.failure, rec.z_alpha, rec.z_beta) {
            (None, Some(za), Some(zb)) => worst = worst.max(za.abs()).max(zb.abs()),
            _ => failed += 1,
        }
    }
    checks.check(
        "stationarity-no-failures",
        failed == 0,
        format!("{failed} failed replicas"),
    );
    checks.check(
        "stationarity-window-z",
        worst < Z_TOL,
        format!("max |z| = {worst:.3} vs {Z_TOL}"),
    );

    StudyOutput {
        records,
        summary: checks.into_summary(),
    }
}
