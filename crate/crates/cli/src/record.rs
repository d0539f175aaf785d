//! Flat study records with CSV and JSON-lines emission.
//!
//! Every record is reproducible from `(master_seed, replica, horizon,
//! model)`; only `wall_ms` varies between runs. Records are sorted by
//! `(study, horizon, rho_w, replica)` before writing so the output does
//! not depend on execution order.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use dmd_filter::error::DmdError;
use dmd_filter::io::fmt_f64;

/// One replica result. Fields not produced by a given study stay `None`
/// and serialize as empty CSV fields / omitted JSON keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRecord {
    pub study: String,
    // model echo
    pub v0: f64,
    pub sigma0: f64,
    pub v: f64,
    pub sigma: f64,
    pub rho_w: f64,
    pub horizon: u64,
    pub replica: u64,
    pub seed: u64,
    /// Wall-clock time of the replica in milliseconds (not reproducible).
    pub wall_ms: f64,
    // calibration estimates
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v0_hat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma0_sq_hat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma0_hat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_alpha_hat: Option<f64>,
    // filter entries
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi11: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi12: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi21: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi22: Option<f64>,
    // error-matrix entries, closed form and Monte Carlo, with z-scores
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g11_theory: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g12_theory: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g22_theory: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g11_mc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g12_mc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g22_mc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_g11: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_g12: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_g22: Option<f64>,
    // correction terms
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_t: Option<f64>,
    // stationarity window diagnostics
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_alpha_first: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_alpha_second: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_beta_first: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var_beta_second: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_beta: Option<f64>,
    /// Failure reason for replicas that could not be calibrated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl StudyRecord {
    /// Blank record carrying only the replica identity.
    pub fn blank(
        study: &str,
        model: &dmd_filter::model::SignalObservationModel,
        horizon: usize,
        replica: u64,
        seed: u64,
    ) -> Self {
        Self {
            study: study.to_string(),
            v0: model.signal().v(),
            sigma0: model.signal().sigma(),
            v: model.observation().v(),
            sigma: model.observation().sigma(),
            rho_w: model.rho_w(),
            horizon: horizon as u64,
            replica,
            seed,
            wall_ms: 0.0,
            v0_hat: None,
            sigma0_sq_hat: None,
            sigma0_hat: None,
            r_alpha_hat: None,
            phi11: None,
            phi12: None,
            phi21: None,
            phi22: None,
            g11_theory: None,
            g12_theory: None,
            g22_theory: None,
            g11_mc: None,
            g12_mc: None,
            g22_mc: None,
            z_g11: None,
            z_g12: None,
            z_g22: None,
            a_t: None,
            b_t: None,
            c_t: None,
            var_alpha_first: None,
            var_alpha_second: None,
            z_alpha: None,
            var_beta_first: None,
            var_beta_second: None,
            z_beta: None,
            failure: None,
        }
    }

    /// Copy with the wall time zeroed, for reproducibility comparisons.
    pub fn without_wall_time(&self) -> Self {
        let mut r = self.clone();
        r.wall_ms = 0.0;
        r
    }
}

/// Sorts records into the canonical emission order.
pub fn sort_records(records: &mut [StudyRecord]) {
    records.sort_by(|a, b| {
        (a.study.as_str(), a.horizon, a.replica)
            .cmp(&(b.study.as_str(), b.horizon, b.replica))
            .then(a.rho_w.total_cmp(&b.rho_w))
    });
}

const CSV_HEADER: &str = "study,v0,sigma0,v,sigma,rho_w,horizon,replica,seed,wall_ms,\
v0_hat,sigma0_sq_hat,sigma0_hat,r_alpha_hat,phi11,phi12,phi21,phi22,\
g11_theory,g12_theory,g22_theory,g11_mc,g12_mc,g22_mc,z_g11,z_g12,z_g22,\
a_t,b_t,c_t,var_alpha_first,var_alpha_second,z_alpha,var_beta_first,var_beta_second,z_beta,failure";

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Writes records as CSV, one row per record.
pub fn write_records_csv<W: Write>(w: &mut W, records: &[StudyRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        // Failure reasons never contain the separator.
        let failure = r
            .failure
            .as_deref()
            .unwrap_or("")
            .replace([',', '\n'], ";");
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.study,
            fmt_f64(r.v0),
            fmt_f64(r.sigma0),
            fmt_f64(r.v),
            fmt_f64(r.sigma),
            fmt_f64(r.rho_w),
            r.horizon,
            r.replica,
            r.seed,
            fmt_f64(r.wall_ms),
            opt(r.v0_hat),
            opt(r.sigma0_sq_hat),
            opt(r.sigma0_hat),
            opt(r.r_alpha_hat),
            opt(r.phi11),
            opt(r.phi12),
            opt(r.phi21),
            opt(r.phi22),
            opt(r.g11_theory),
            opt(r.g12_theory),
            opt(r.g22_theory),
            opt(r.g11_mc),
            opt(r.g12_mc),
            opt(r.g22_mc),
            opt(r.z_g11),
            opt(r.z_g12),
            opt(r.z_g22),
            opt(r.a_t),
            opt(r.b_t),
            opt(r.c_t),
            opt(r.var_alpha_first),
            opt(r.var_alpha_second),
            opt(r.z_alpha),
            opt(r.var_beta_first),
            opt(r.var_beta_second),
            opt(r.z_beta),
            failure,
        )?;
    }
    Ok(())
}

fn parse_req(field: &str, line: usize) -> Result<f64, DmdError> {
    field.parse().map_err(|_| DmdError::CsvParse {
        line,
        reason: format!("bad float {field:?}"),
    })
}

fn parse_opt(field: &str, line: usize) -> Result<Option<f64>, DmdError> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_req(field, line).map(Some)
    }
}

fn parse_int(field: &str, line: usize) -> Result<u64, DmdError> {
    field.parse().map_err(|_| DmdError::CsvParse {
        line,
        reason: format!("bad integer {field:?}"),
    })
}

/// Parses the output of [`write_records_csv`].
pub fn parse_records_csv(text: &str) -> Result<Vec<StudyRecord>, DmdError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        _ => {
            return Err(DmdError::CsvParse {
                line: 1,
                reason: "unexpected record header".into(),
            })
        }
    }
    let mut out = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let f: Vec<&str> = raw.split(',').collect();
        if f.len() != 37 {
            return Err(DmdError::CsvParse {
                line,
                reason: format!("expected 37 fields, got {}", f.len()),
            });
        }
        out.push(StudyRecord {
            study: f[0].to_string(),
            v0: parse_req(f[1], line)?,
            sigma0: parse_req(f[2], line)?,
            v: parse_req(f[3], line)?,
            sigma: parse_req(f[4], line)?,
            rho_w: parse_req(f[5], line)?,
            horizon: parse_int(f[6], line)?,
            replica: parse_int(f[7], line)?,
            seed: parse_int(f[8], line)?,
            wall_ms: parse_req(f[9], line)?,
            v0_hat: parse_opt(f[10], line)?,
            sigma0_sq_hat: parse_opt(f[11], line)?,
            sigma0_hat: parse_opt(f[12], line)?,
            r_alpha_hat: parse_opt(f[13], line)?,
            phi11: parse_opt(f[14], line)?,
            phi12: parse_opt(f[15], line)?,
            phi21: parse_opt(f[16], line)?,
            phi22: parse_opt(f[17], line)?,
            g11_theory: parse_opt(f[18], line)?,
            g12_theory: parse_opt(f[19], line)?,
            g22_theory: parse_opt(f[20], line)?,
            g11_mc: parse_opt(f[21], line)?,
            g12_mc: parse_opt(f[22], line)?,
            g22_mc: parse_opt(f[23], line)?,
            z_g11: parse_opt(f[24], line)?,
            z_g12: parse_opt(f[25], line)?,
            z_g22: parse_opt(f[26], line)?,
            a_t: parse_opt(f[27], line)?,
            b_t: parse_opt(f[28], line)?,
            c_t: parse_opt(f[29], line)?,
            var_alpha_first: parse_opt(f[30], line)?,
            var_alpha_second: parse_opt(f[31], line)?,
            z_alpha: parse_opt(f[32], line)?,
            var_beta_first: parse_opt(f[33], line)?,
            var_beta_second: parse_opt(f[34], line)?,
            z_beta: parse_opt(f[35], line)?,
            failure: (!f[36].is_empty()).then(|| f[36].to_string()),
        });
    }
    Ok(out)
}

/// Writes records as JSON lines, one flat object per record.
pub fn write_records_jsonl<W: Write>(w: &mut W, records: &[StudyRecord]) -> io::Result<()> {
    for r in records {
        let json = serde_json::to_string(r).expect("record serialization cannot fail");
        writeln!(w, "{json}")?;
    }
    Ok(())
}

/// Parses the output of [`write_records_jsonl`].
pub fn parse_records_jsonl(text: &str) -> Result<Vec<StudyRecord>, serde_json::Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
