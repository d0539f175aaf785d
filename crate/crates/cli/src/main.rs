//! Command-line interface: simulation, filtering, estimation, error
//! reports, and config-driven Monte Carlo studies.
//!
//! Data goes to `--out` (or standard output); diagnostics go to standard
//! error. Exit codes: 0 success, 1 usage error, 2 numerical/domain error,
//! 3 failed study checks.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use dmd_filter::empirical::{
    assemble_blocks, calibrate_from, empirical_covariances, empirical_filter_matrix, sample_means,
    BlockMode,
};
use dmd_filter::error::DmdError;
use dmd_filter::filter::{apply_filter, FilterMatrix, FilteredEstimates};
use dmd_filter::filter_error::{theoretical_error_matrix, theoretical_gamma};
use dmd_filter::io::{
    fmt_f64, parse_pair_csv, write_error_report_csv, write_estimates_csv, write_pair_csv,
    write_trajectory_csv, ErrorReportRow,
};
use dmd_filter::model::{DmdParams, SignalObservationModel};
use dmd_filter::trajectory::{simulate_dmd, simulate_pair, Init, PairedTrajectory, Trajectory};
use dmd_filter_cli::config::parse_config;
use dmd_filter_cli::record::{write_records_csv, write_records_jsonl};
use dmd_filter_cli::study::{error_comparison, run_study};

#[derive(Parser)]
#[command(
    name = "dmd-filter",
    version,
    about = "Stationary Gaussian discrete Markov diffusions: simulation, filtering, estimation, and Monte Carlo studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum InitArg {
    /// Draw the initial state from the exact stationary law
    Stationary,
    /// Start from the state given by --x0
    Fixed,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ModeArg {
    /// Observation block from raw sample moments
    Raw,
    /// Observation block from its regression structure (requires --v)
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one diffusion and emit its trajectory
    Simulate {
        /// Drift coefficient, in (0, 2)
        #[arg(long)]
        v: f64,
        /// Noise intensity, >= 0
        #[arg(long)]
        sigma: f64,
        /// Number of steps
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = InitArg::Stationary)]
        init: InitArg,
        /// Initial state for --init fixed
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        /// Steps to simulate and discard before the emitted trajectory
        #[arg(long, default_value_t = 0)]
        burn_in: usize,
        /// Omit the driving-noise column
        #[arg(long)]
        drop_noises: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Simulate a correlated signal/observation pair
    SimulatePair {
        /// Signal drift, in (0, 2)
        #[arg(long)]
        v0: f64,
        /// Signal noise intensity, >= 0
        #[arg(long)]
        sigma0: f64,
        /// Observation drift, in (0, 2)
        #[arg(long)]
        v: f64,
        /// Observation noise intensity, >= 0
        #[arg(long)]
        sigma: f64,
        /// Per-step noise correlation, in [-1, 1]
        #[arg(long, default_value_t = 0.0)]
        rho_w: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Omit the driving-noise columns
        #[arg(long)]
        drop_noises: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Calibrate an empirical filter on a paired CSV and apply it to the
    /// observation component
    Filter {
        /// Paired trajectory CSV
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Raw)]
        mode: ModeArg,
        /// Observation drift, required by --mode structured
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Estimate signal drift and noise intensity from a paired CSV
    Estimate {
        /// Paired trajectory CSV
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Closed-form error matrix, optionally validated by simulation
    Error {
        #[arg(long)]
        v0: f64,
        #[arg(long)]
        sigma0: f64,
        #[arg(long)]
        v: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        rho_w: f64,
        /// Steps of a validation run; adds a Monte Carlo row
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a Monte Carlo study described by a config file
    Study {
        /// Config file (key = value lines)
        #[arg(long)]
        config: PathBuf,
        /// Output path (overrides the config's `out`)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

enum CliError {
    Domain(DmdError),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Usage(_) | CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Domain(e) => e.to_string(),
            CliError::Usage(m) => m.clone(),
            CliError::Io(e) => e.to_string(),
        }
    }
}

impl From<DmdError> for CliError {
    fn from(e: DmdError) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn trajectory_jsonl(traj: &Trajectory) -> Vec<u8> {
    let mut buf = Vec::new();
    for k in 0..=traj.steps() {
        let mut obj = serde_json::Map::new();
        obj.insert("k".into(), k.into());
        obj.insert("alpha".into(), traj.values()[k].into());
        if k < traj.steps() {
            obj.insert("d_alpha".into(), traj.increments()[k].into());
            if let Some(w) = traj.noises() {
                obj.insert("w0".into(), w[k].into());
            }
        }
        buf.extend_from_slice(serde_json::Value::Object(obj).to_string().as_bytes());
        buf.push(b'\n');
    }
    buf
}

fn pair_jsonl(pair: &PairedTrajectory) -> Vec<u8> {
    let mut buf = Vec::new();
    for k in 0..=pair.steps() {
        let mut obj = serde_json::Map::new();
        obj.insert("k".into(), k.into());
        obj.insert("alpha".into(), pair.alpha().values()[k].into());
        obj.insert("beta".into(), pair.beta().values()[k].into());
        if k < pair.steps() {
            obj.insert("d_alpha".into(), pair.alpha().increments()[k].into());
            obj.insert("d_beta".into(), pair.beta().increments()[k].into());
            if let Some(w) = pair.alpha().noises() {
                obj.insert("w0".into(), w[k].into());
            }
            if let Some(w) = pair.beta().noises() {
                obj.insert("w".into(), w[k].into());
            }
        }
        buf.extend_from_slice(serde_json::Value::Object(obj).to_string().as_bytes());
        buf.push(b'\n');
    }
    buf
}

fn estimates_jsonl(est: &FilteredEstimates) -> Vec<u8> {
    let mut buf = Vec::new();
    for (k, (a, da)) in est.alpha_hat.iter().zip(&est.d_alpha_hat).enumerate() {
        let line = serde_json::json!({ "k": k, "alpha_hat": a, "d_alpha_hat": da });
        buf.extend_from_slice(line.to_string().as_bytes());
        buf.push(b'\n');
    }
    buf
}

fn filter_kv(phi: &FilterMatrix) -> String {
    format!(
        "phi11 = {}\nphi12 = {}\nphi21 = {}\nphi22 = {}\n",
        fmt_f64(phi.phi11),
        fmt_f64(phi.phi12),
        fmt_f64(phi.phi21),
        fmt_f64(phi.phi22)
    )
}

fn read_pair(path: &PathBuf) -> Result<PairedTrajectory, CliError> {
    let text = fs::read_to_string(path)?;
    Ok(parse_pair_csv(&text)?)
}

fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Simulate {
            v,
            sigma,
            steps,
            seed,
            init,
            x0,
            burn_in,
            drop_noises,
            out,
            format,
        } => {
            let params = DmdParams::new(v, sigma)?;
            let init = match init {
                InitArg::Stationary => Init::Stationary,
                InitArg::Fixed => Init::Fixed(x0),
            };
            let mut traj = simulate_dmd(&params, steps + burn_in, init, seed)?;
            traj.discard_prefix(burn_in)?;
            if drop_noises {
                traj.drop_noises();
            }
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_trajectory_csv(&mut buf, &traj)?;
                    buf
                }
                Format::Json => trajectory_jsonl(&traj),
            };
            emit(&out, &bytes)?;
            Ok(0)
        }

        Command::SimulatePair {
            v0,
            sigma0,
            v,
            sigma,
            rho_w,
            steps,
            seed,
            drop_noises,
            out,
            format,
        } => {
            let model = SignalObservationModel::from_raw(v0, sigma0, v, sigma, rho_w)?;
            let mut pair = simulate_pair(&model, steps, seed)?;
            if drop_noises {
                pair.drop_noises();
            }
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_pair_csv(&mut buf, &pair)?;
                    buf
                }
                Format::Json => pair_jsonl(&pair),
            };
            emit(&out, &bytes)?;
            Ok(0)
        }

        Command::Filter {
            input,
            mode,
            v,
            out,
            format,
        } => {
            let pair = read_pair(&input)?;
            let emp = empirical_covariances(&pair)?;
            let block_mode = match mode {
                ModeArg::Raw => BlockMode::Raw,
                ModeArg::Structured => BlockMode::Structured(v.ok_or_else(|| {
                    CliError::Usage("--mode structured requires --v".to_string())
                })?),
            };
            let (cross, obs) = assemble_blocks(&emp, block_mode);
            let phi = empirical_filter_matrix(&cross, &obs)?;
            let est = apply_filter(&phi, pair.beta())?;
            eprint!("{}", filter_kv(&phi));
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_estimates_csv(&mut buf, &est)?;
                    buf
                }
                Format::Json => estimates_jsonl(&est),
            };
            emit(&out, &bytes)?;
            Ok(0)
        }

        Command::Estimate { input, out, format } => {
            let pair = read_pair(&input)?;
            let emp = empirical_covariances(&pair)?;
            let cal = calibrate_from(&emp)?;
            let (mean_alpha, mean_beta) = sample_means(&pair)?;
            eprint!("{}", dmd_filter::io::empirical_kv(&emp));
            let bytes = match format {
                Format::Csv => format!(
                    "v0_hat = {}\nsigma0_sq_hat = {}\nsigma0_hat = {}\nr_alpha_hat = {}\n\
                     phi11 = {}\nphi21 = {}\nhorizon = {}\nmean_alpha = {}\nmean_beta = {}\n",
                    fmt_f64(cal.v0_hat),
                    fmt_f64(cal.sigma0_sq_hat),
                    fmt_f64(cal.sigma0_hat),
                    fmt_f64(cal.r_alpha_hat),
                    fmt_f64(cal.filter.phi11),
                    fmt_f64(cal.filter.phi21),
                    emp.horizon,
                    fmt_f64(mean_alpha),
                    fmt_f64(mean_beta),
                )
                .into_bytes(),
                Format::Json => {
                    let mut json = serde_json::json!({
                        "v0_hat": cal.v0_hat,
                        "sigma0_sq_hat": cal.sigma0_sq_hat,
                        "sigma0_hat": cal.sigma0_hat,
                        "r_alpha_hat": cal.r_alpha_hat,
                        "phi11": cal.filter.phi11,
                        "phi21": cal.filter.phi21,
                        "horizon": emp.horizon,
                        "mean_alpha": mean_alpha,
                        "mean_beta": mean_beta,
                    })
                    .to_string();
                    json.push('\n');
                    json.into_bytes()
                }
            };
            emit(&out, &bytes)?;
            Ok(0)
        }

        Command::Error {
            v0,
            sigma0,
            v,
            sigma,
            rho_w,
            steps,
            seed,
            out,
            format,
        } => {
            let model = SignalObservationModel::from_raw(v0, sigma0, v, sigma, rho_w)?;
            let theory = theoretical_error_matrix(&model)?;
            let gamma = theoretical_gamma(&model)?.value();
            let mut rows = vec![ErrorReportRow {
                g11: theory.g11,
                g12: theory.g12,
                g22: theory.g22,
                trace: theory.trace(),
                gamma_ab: gamma,
            }];
            if let Some(t) = steps {
                let cmp = error_comparison(&model, t, seed)?;
                rows.push(ErrorReportRow {
                    g11: cmp.mc_g11,
                    g12: cmp.mc_g12,
                    g22: cmp.mc_g22,
                    trace: cmp.mc_g11 + cmp.mc_g22,
                    gamma_ab: cmp.empirical_gamma,
                });
                eprintln!(
                    "z-scores: g11 = {:.3}, g12 = {:.3}, g22 = {:.3}",
                    cmp.z_g11, cmp.z_g12, cmp.z_g22
                );
            }
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_error_report_csv(&mut buf, &rows)?;
                    buf
                }
                Format::Json => {
                    let mut buf = Vec::new();
                    for r in &rows {
                        let line = serde_json::json!({
                            "g11": r.g11,
                            "g12": r.g12,
                            "g22": r.g22,
                            "trace": r.trace,
                            "gamma_ab": r.gamma_ab,
                        });
                        buf.extend_from_slice(line.to_string().as_bytes());
                        buf.push(b'\n');
                    }
                    buf
                }
            };
            emit(&out, &bytes)?;
            Ok(0)
        }

        Command::Study {
            config,
            out,
            format,
        } => {
            let text = fs::read_to_string(&config)?;
            let cfg = parse_config(&text).map_err(|e| match e {
                dmd_filter_cli::config::ConfigError::Model(m) => CliError::Domain(m),
                other => CliError::Usage(other.to_string()),
            })?;
            let output = run_study(&cfg);
            for line in &output.summary.lines {
                eprintln!("{line}");
            }
            let bytes = match format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_records_csv(&mut buf, &output.records)?;
                    buf
                }
                Format::Json => {
                    let mut buf = Vec::new();
                    write_records_jsonl(&mut buf, &output.records)?;
                    buf
                }
            };
            let destination = out.or(cfg.out);
            emit(&destination, &bytes)?;
            if output.summary.passed {
                eprintln!("study {}: all checks passed", cfg.study.name());
                Ok(0)
            } else {
                eprintln!("study {}: checks FAILED", cfg.study.name());
                Ok(3)
            }
        }
    }
}
