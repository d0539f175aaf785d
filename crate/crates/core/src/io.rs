//! CSV and key=value serialization of trajectories, estimates, and
//! moments.
//!
//! Floating point is written with 17 significant digits, which
//! round-trips `f64` exactly; re-reading a written trajectory reproduces
//! it bit-for-bit. Trajectory rows carry `(x(k), dx(k+1))` for
//! `k = 0..T-1`, plus a final row holding the last state with empty
//! increment fields.

use std::io::{self, Write};

use crate::error::DmdError;
use crate::filter::FilteredEstimates;
use crate::trajectory::{PairedTrajectory, Trajectory};
use crate::empirical::{Corrections, EmpiricalCov};

/// Formats one value with 17 significant digits (lossless for `f64`).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn parse_field(s: &str, line: usize) -> Result<f64, DmdError> {
    s.trim().parse::<f64>().map_err(|_| DmdError::CsvParse {
        line,
        reason: format!("bad float {s:?}"),
    })
}

fn parse_opt_field(s: &str, line: usize) -> Result<Option<f64>, DmdError> {
    let t = s.trim();
    if t.is_empty() {
        Ok(None)
    } else {
        parse_field(t, line).map(Some)
    }
}

/// Writes a single trajectory as `k,alpha,d_alpha[,w0]`.
pub fn write_trajectory_csv<W: Write>(w: &mut W, traj: &Trajectory) -> io::Result<()> {
    let with_noise = traj.noises().is_some();
    if with_noise {
        writeln!(w, "k,alpha,d_alpha,w0")?;
    } else {
        writeln!(w, "k,alpha,d_alpha")?;
    }
    let t = traj.steps();
    for k in 0..=t {
        let value = fmt_f64(traj.values()[k]);
        let inc = opt(traj.increments().get(k).copied());
        if with_noise {
            let noise = opt(traj.noises().unwrap().get(k).copied());
            writeln!(w, "{k},{value},{inc},{noise}")?;
        } else {
            writeln!(w, "{k},{value},{inc}")?;
        }
    }
    Ok(())
}

/// Parses the output of [`write_trajectory_csv`].
pub fn parse_trajectory_csv(text: &str) -> Result<Trajectory, DmdError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(DmdError::CsvParse {
        line: 1,
        reason: "empty input".into(),
    })?;
    let with_noise = match header.trim() {
        "k,alpha,d_alpha" => false,
        "k,alpha,d_alpha,w0" => true,
        other => {
            return Err(DmdError::CsvParse {
                line: 1,
                reason: format!("unexpected header {other:?}"),
            })
        }
    };
    let mut values = Vec::new();
    let mut increments = Vec::new();
    let mut noises = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split(',').collect();
        let expected = if with_noise { 4 } else { 3 };
        if fields.len() != expected {
            return Err(DmdError::CsvParse {
                line,
                reason: format!("expected {expected} fields, got {}", fields.len()),
            });
        }
        values.push(parse_field(fields[1], line)?);
        if let Some(d) = parse_opt_field(fields[2], line)? {
            increments.push(d);
        }
        if with_noise {
            if let Some(n) = parse_opt_field(fields[3], line)? {
                noises.push(n);
            }
        }
    }
    Trajectory::new(values, increments, with_noise.then_some(noises))
}

/// Writes a pair as `k,alpha,d_alpha,beta,d_beta[,w0,w]`.
///
/// The noise columns are present only when both components retain their
/// noises.
pub fn write_pair_csv<W: Write>(w: &mut W, pair: &PairedTrajectory) -> io::Result<()> {
    let with_noise = pair.alpha().noises().is_some() && pair.beta().noises().is_some();
    if with_noise {
        writeln!(w, "k,alpha,d_alpha,beta,d_beta,w0,w")?;
    } else {
        writeln!(w, "k,alpha,d_alpha,beta,d_beta")?;
    }
    let t = pair.steps();
    for k in 0..=t {
        let a = fmt_f64(pair.alpha().values()[k]);
        let da = opt(pair.alpha().increments().get(k).copied());
        let b = fmt_f64(pair.beta().values()[k]);
        let db = opt(pair.beta().increments().get(k).copied());
        if with_noise {
            let w0 = opt(pair.alpha().noises().unwrap().get(k).copied());
            let wn = opt(pair.beta().noises().unwrap().get(k).copied());
            writeln!(w, "{k},{a},{da},{b},{db},{w0},{wn}")?;
        } else {
            writeln!(w, "{k},{a},{da},{b},{db}")?;
        }
    }
    Ok(())
}

/// Parses the output of [`write_pair_csv`].
pub fn parse_pair_csv(text: &str) -> Result<PairedTrajectory, DmdError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(DmdError::CsvParse {
        line: 1,
        reason: "empty input".into(),
    })?;
    let with_noise = match header.trim() {
        "k,alpha,d_alpha,beta,d_beta" => false,
        "k,alpha,d_alpha,beta,d_beta,w0,w" => true,
        other => {
            return Err(DmdError::CsvParse {
                line: 1,
                reason: format!("unexpected header {other:?}"),
            })
        }
    };
    let mut a_values = Vec::new();
    let mut a_increments = Vec::new();
    let mut a_noises = Vec::new();
    let mut b_values = Vec::new();
    let mut b_increments = Vec::new();
    let mut b_noises = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split(',').collect();
        let expected = if with_noise { 7 } else { 5 };
        if fields.len() != expected {
            return Err(DmdError::CsvParse {
                line,
                reason: format!("expected {expected} fields, got {}", fields.len()),
            });
        }
        a_values.push(parse_field(fields[1], line)?);
        if let Some(d) = parse_opt_field(fields[2], line)? {
            a_increments.push(d);
        }
        b_values.push(parse_field(fields[3], line)?);
        if let Some(d) = parse_opt_field(fields[4], line)? {
            b_increments.push(d);
        }
        if with_noise {
            if let Some(n) = parse_opt_field(fields[5], line)? {
                a_noises.push(n);
            }
            if let Some(n) = parse_opt_field(fields[6], line)? {
                b_noises.push(n);
            }
        }
    }
    let alpha = Trajectory::new(a_values, a_increments, with_noise.then_some(a_noises))?;
    let beta = Trajectory::new(b_values, b_increments, with_noise.then_some(b_noises))?;
    PairedTrajectory::new(alpha, beta)
}

/// Writes filter estimates as `k,alpha_hat,d_alpha_hat`.
pub fn write_estimates_csv<W: Write>(w: &mut W, est: &FilteredEstimates) -> io::Result<()> {
    writeln!(w, "k,alpha_hat,d_alpha_hat")?;
    for (k, (a, da)) in est.alpha_hat.iter().zip(&est.d_alpha_hat).enumerate() {
        writeln!(w, "{k},{},{}", fmt_f64(*a), fmt_f64(*da))?;
    }
    Ok(())
}

/// One row of an error report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReportRow {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub trace: f64,
    pub gamma_ab: f64,
}

/// Writes error reports as `g11,g12,g22,trace,gamma_ab`, one row each.
pub fn write_error_report_csv<W: Write>(w: &mut W, rows: &[ErrorReportRow]) -> io::Result<()> {
    writeln!(w, "g11,g12,g22,trace,gamma_ab")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(r.g11),
            fmt_f64(r.g12),
            fmt_f64(r.g22),
            fmt_f64(r.trace),
            fmt_f64(r.gamma_ab)
        )?;
    }
    Ok(())
}

/// Flat `key = value` block of the sample moments.
pub fn empirical_kv(emp: &EmpiricalCov) -> String {
    format!(
        "horizon = {}\nr_ab = {}\nr_ab0 = {}\nr_ba0 = {}\nr_ab_delta = {}\nr_b = {}\nr_b0 = {}\nr_b_delta = {}\nr_a = {}\n",
        emp.horizon,
        fmt_f64(emp.r_ab),
        fmt_f64(emp.r_ab0),
        fmt_f64(emp.r_ba0),
        fmt_f64(emp.r_ab_delta),
        fmt_f64(emp.r_b),
        fmt_f64(emp.r_b0),
        fmt_f64(emp.r_b_delta),
        fmt_f64(emp.r_a),
    )
}

/// CSV row of the sample moments keyed by the horizon.
pub fn empirical_csv<W: Write>(w: &mut W, rows: &[EmpiricalCov]) -> io::Result<()> {
    writeln!(w, "T,r_ab,r_ab0,r_ba0,r_ab_delta,r_b,r_b0,r_b_delta,r_a")?;
    for e in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            e.horizon,
            fmt_f64(e.r_ab),
            fmt_f64(e.r_ab0),
            fmt_f64(e.r_ba0),
            fmt_f64(e.r_ab_delta),
            fmt_f64(e.r_b),
            fmt_f64(e.r_b0),
            fmt_f64(e.r_b_delta),
            fmt_f64(e.r_a)
        )?;
    }
    Ok(())
}

/// Flat `key = value` block of the correction terms.
pub fn corrections_kv(corr: &Corrections) -> String {
    format!(
        "horizon = {}\na_t = {}\nb_t = {}\nc_t = {}\n",
        corr.horizon,
        fmt_f64(corr.a_t),
        fmt_f64(corr.b_t),
        fmt_f64(corr.c_t),
    )
}

/// CSV rows of correction terms keyed by the horizon.
pub fn corrections_csv<W: Write>(w: &mut W, rows: &[Corrections]) -> io::Result<()> {
    writeln!(w, "T,a_t,b_t,c_t")?;
    for c in rows {
        writeln!(
            w,
            "{},{},{},{}",
            c.horizon,
            fmt_f64(c.a_t),
            fmt_f64(c.b_t),
            fmt_f64(c.c_t)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SignalObservationModel;
    use crate::trajectory::{simulate_dmd, simulate_pair, Init};

    #[test]
    fn fmt_f64_round_trips() {
        for x in [4.0 / 3.0, -0.05, 1e-300, 2.2e17, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn trajectory_csv_round_trip_is_exact() {
        let p = crate::model::DmdParams::new(0.5, 1.0).unwrap();
        let t = simulate_dmd(&p, 25, Init::Stationary, 77).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &t).unwrap();
        let back = parse_trajectory_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(t, back);

        let mut no_noise = t.clone();
        no_noise.drop_noises();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &no_noise).unwrap();
        let back = parse_trajectory_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(no_noise, back);
    }

    #[test]
    fn pair_csv_round_trip_is_exact() {
        let m = SignalObservationModel::from_raw(0.4, 1.0, 0.5, 1.0, 0.6).unwrap();
        let pair = simulate_pair(&m, 17, 5).unwrap();
        let mut buf = Vec::new();
        write_pair_csv(&mut buf, &pair).unwrap();
        let back = parse_pair_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(pair, back);
    }

    #[test]
    fn malformed_csv_is_reported_with_line_numbers() {
        assert!(matches!(
            parse_trajectory_csv("nope\n"),
            Err(DmdError::CsvParse { line: 1, .. })
        ));
        let bad = "k,alpha,d_alpha\n0,1.0\n";
        assert!(matches!(
            parse_trajectory_csv(bad),
            Err(DmdError::CsvParse { line: 2, .. })
        ));
        let bad = "k,alpha,d_alpha\n0,xyz,1.0\n1,2.0,\n";
        assert!(matches!(
            parse_trajectory_csv(bad),
            Err(DmdError::CsvParse { line: 2, .. })
        ));
    }

    #[test]
    fn estimates_csv_layout() {
        let est = FilteredEstimates {
            alpha_hat: vec![1.0, 2.0],
            d_alpha_hat: vec![-0.5, 0.25],
        };
        let mut buf = Vec::new();
        write_estimates_csv(&mut buf, &est).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "k,alpha_hat,d_alpha_hat");
        assert!(lines.next().unwrap().starts_with("0,1.0000000000000000e0,"));
    }

    #[test]
    fn moment_csv_rows_are_keyed_by_horizon() {
        let emp = EmpiricalCov {
            r_ab: 1.0,
            r_ab0: 2.0,
            r_ba0: 3.0,
            r_ab_delta: 4.0,
            r_b: 5.0,
            r_b0: 6.0,
            r_b_delta: 7.0,
            r_a: 8.0,
            horizon: 1000,
        };
        let mut buf = Vec::new();
        empirical_csv(&mut buf, &[emp]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "T,r_ab,r_ab0,r_ba0,r_ab_delta,r_b,r_b0,r_b_delta,r_a"
        );
        assert!(lines.next().unwrap().starts_with("1000,1.0000000000000000e0,"));

        let corr = Corrections {
            a_t: 0.5,
            b_t: -0.5,
            c_t: 0.0,
            horizon: 1000,
        };
        let mut buf = Vec::new();
        corrections_csv(&mut buf, &[corr]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "T,a_t,b_t,c_t");
        assert!(text.lines().nth(1).unwrap().starts_with("1000,5.0000000000000000e-1,"));
    }

    #[test]
    fn kv_blocks_are_flat() {
        let emp = EmpiricalCov {
            r_ab: 1.0,
            r_ab0: 2.0,
            r_ba0: 3.0,
            r_ab_delta: 4.0,
            r_b: 5.0,
            r_b0: 6.0,
            r_b_delta: 7.0,
            r_a: 8.0,
            horizon: 9,
        };
        let kv = empirical_kv(&emp);
        assert!(kv.contains("horizon = 9\n"));
        assert!(kv.contains("r_ab = 1.0000000000000000e0\n"));
        let corr = Corrections {
            a_t: 0.1,
            b_t: 0.2,
            c_t: 0.25,
            horizon: 9,
        };
        assert!(corrections_kv(&corr).contains("c_t = 2.5000000000000000e-1"));
    }
}
