//! Flag parsing, config merging, command dispatch and atomic output for the
//! `pstchain` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::{Deserialize, Serialize};

use pstchain::analysis::{
    cycle_verify, fidelity_scan, fr_predict, pst_predict, resolve_ratio, CycleReport,
    FidelitySeries, FrPrediction, PredictedTime, PstPrediction, RatioSource, TimeScale,
};
use pstchain::chain::{build_hamiltonian, ChainSpec};
use pstchain::config::{parse_env_tol, Command, Format, PartialConfig, RunConfig, Scalar};
use pstchain::dynamics::{
    endpoint_state, evolve, verify_mirror_inversion, AmplitudeVector, EndpointState,
    MirrorInversionReport, QuadraticQ,
};
use pstchain::expr::{format_pi_multiple, Param};
use pstchain::ratio::{DEFAULT_MAX_DEN, DEFAULT_RATIONALIZE_TOL};
use pstchain::spectral::analytic_eigenbasis;

#[derive(Debug, Parser)]
#[command(
    name = "pstchain",
    version,
    about = "Transfer and revival in XX chains with next-nearest-neighbour couplings"
)]
pub struct Cli {
    /// couplings | spectrum | evolve | scan | check-pst | check-fr | cycle
    pub command: Option<String>,
    /// Chain length parameter; the chain has N+1 sites.
    #[arg(long = "N", visible_alias = "n", allow_hyphen_values = true)]
    pub n: Option<String>,
    /// Quadratic coefficient: integer, "p/q" or decimal.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Linear coefficient: integer, "p/q" or decimal.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Evolution time, e.g. 1.5, pi/2, 3pi/4.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// End of the scan window.
    #[arg(long = "t-max", allow_hyphen_values = true)]
    pub t_max: Option<String>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// JSON file with any of the fields above; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pstchain::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FAILED: u8 = 2;

impl Cli {
    pub fn to_partial(&self) -> Result<PartialConfig, CliError> {
        let n = self
            .n
            .as_deref()
            .map(|s| {
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| CliError::Usage(format!("--N expects an integer, got {s:?}")))
            })
            .transpose()?;
        Ok(PartialConfig {
            command: self.command.as_deref().map(str::parse).transpose()?,
            n,
            alpha: self.alpha.clone().map(Scalar::Text),
            beta: self.beta.clone().map(Scalar::Text),
            t: self.t.clone().map(Scalar::Text),
            t_max: self.t_max.clone().map(Scalar::Text),
            steps: self.steps,
            output: self.output.clone(),
            format: self.format.as_deref().map(str::parse::<Format>).transpose()?,
            tol: self.tol,
        })
    }

    /// Resolves the final configuration from `PSTCHAIN_TOL`, `--config` and
    /// the flags.
    pub fn resolve(&self, env_tol: Option<&str>) -> Result<RunConfig, CliError> {
        let env_tol = parse_env_tol(env_tol)?;
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                PartialConfig::from_json(&text)?
            }
            None => PartialConfig::default(),
        };
        Ok(RunConfig::resolve(env_tol, file, self.to_partial()?)?)
    }
}

/// Rendered output and whether the requested check succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainHeader {
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha: String,
    pub beta: String,
}

/// `j1[n-1] = J^(1)_n`, `j2[n-1] = J^(2)_{n+1}`, `b[n] = B_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingsReport {
    pub chain: ChainHeader,
    pub j1: Vec<f64>,
    pub j2: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub chain: ChainHeader,
    /// Eigenvalues `x_s = s − N/2` of the base Jacobi matrix.
    pub eigenvalues: Vec<f64>,
    /// `Q(x_s) = α x_s² + β x_s`.
    pub energies: Vec<f64>,
    pub weights: Vec<f64>,
    pub parities: Option<Vec<i8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveReport {
    pub chain: ChainHeader,
    pub t: String,
    pub state: AmplitudeVector,
    pub probabilities: Vec<f64>,
    pub endpoint: EndpointState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckPstReport {
    pub chain: ChainHeader,
    pub ratio_source: Option<RatioSource>,
    pub prediction: PstPrediction,
    pub time: Option<String>,
    pub time_value: Option<f64>,
    pub verification: Option<MirrorInversionReport>,
}

/// End-site amplitudes measured at the predicted revival time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevivalCheck {
    pub t: f64,
    pub mu_abs: f64,
    pub nu_abs: f64,
    pub expected_mu_abs: f64,
    pub expected_nu_abs: f64,
    pub leakage: f64,
    pub rel_phase: Option<f64>,
    pub max_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckFrReport {
    pub chain: ChainHeader,
    pub ratio_source: Option<RatioSource>,
    pub prediction: FrPrediction,
    pub tau: Option<String>,
    pub tau_value: Option<f64>,
    pub verification: Option<RevivalCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleOutput {
    pub chain: ChainHeader,
    pub ratio_source: Option<RatioSource>,
    pub prediction: FrPrediction,
    pub tau: Option<String>,
    pub report: Option<CycleReport>,
}

fn header(cfg: &RunConfig) -> ChainHeader {
    ChainHeader {
        n: cfg.n,
        alpha: cfg.alpha.to_string(),
        beta: cfg.beta.to_string(),
    }
}

fn chain_spec(cfg: &RunConfig) -> Result<ChainSpec, CliError> {
    Ok(match (cfg.alpha.exact, cfg.beta.exact) {
        (Some(a), Some(b)) => ChainSpec::from_exact(cfg.n, a, b)?,
        _ => ChainSpec::new(cfg.n, cfg.alpha.value, cfg.beta.value)?,
    })
}

/// A predicted time as `"3pi/2"` when the relevant coupling is exact,
/// otherwise as a decimal.
fn format_time(time: &PredictedTime, alpha: &Param, beta: &Param) -> String {
    let unit = match time.scale {
        TimeScale::PiOverBeta => beta.exact,
        TimeScale::PiOverAlpha => alpha.exact,
    };
    match unit.and_then(|u| time.factor.checked_div(&u)) {
        Some(r) => format_pi_multiple(r),
        None => format!("{}", time.value(alpha.value, beta.value)),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn json_only(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.effective_format() {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::Usage(format!(
            "{} only supports --format json",
            cfg.command
        ))),
    }
}

/// Runs one command. `Err` is a usage error; a refused or failed check is
/// an `Outcome` with `passed == false`.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = chain_spec(cfg)?;
    let chain = header(cfg);
    let ok = |body: String| Outcome { body, passed: true };
    match cfg.command {
        Command::Couplings => {
            json_only(cfg)?;
            let h = build_hamiltonian(&spec);
            let report = CouplingsReport {
                chain,
                j1: h.band(1).unwrap_or(&[]).to_vec(),
                j2: h.band(2).unwrap_or(&[]).to_vec(),
                b: h.diag().to_vec(),
            };
            Ok(ok(to_json(&report)))
        }
        Command::Spectrum => {
            json_only(cfg)?;
            let data = analytic_eigenbasis(cfg.n);
            let q = QuadraticQ::from(&spec);
            let report = SpectrumReport {
                chain,
                energies: data.eigenvalues.iter().map(|&x| q.eval(x)).collect(),
                eigenvalues: data.eigenvalues,
                weights: data.weights,
                parities: data.parities,
            };
            Ok(ok(to_json(&report)))
        }
        Command::Evolve => {
            json_only(cfg)?;
            let t = cfg
                .t
                .ok_or_else(|| CliError::Usage("evolve needs --t".into()))?;
            let data = analytic_eigenbasis(cfg.n);
            let state = evolve(&data, QuadraticQ::from(&spec), t.value, 0);
            let report = EvolveReport {
                chain,
                t: t.to_string(),
                probabilities: state.probabilities(),
                endpoint: EndpointState::from_amplitudes(&state),
                state,
            };
            Ok(ok(to_json(&report)))
        }
        Command::Scan => {
            let t_max = cfg
                .t_max
                .ok_or_else(|| CliError::Usage("scan needs --t-max".into()))?;
            let series = fidelity_scan(&spec, t_max.value, cfg.steps)?;
            Ok(ok(match cfg.effective_format() {
                Format::Csv => series.to_csv(),
                Format::Json => to_json(&series),
            }))
        }
        Command::CheckPst => {
            json_only(cfg)?;
            Ok(check_pst(cfg, &spec, chain))
        }
        Command::CheckFr => {
            json_only(cfg)?;
            Ok(check_fr(cfg, &spec, chain))
        }
        Command::Cycle => {
            json_only(cfg)?;
            Ok(cycle(cfg, &spec, chain))
        }
    }
}

fn check_pst(cfg: &RunConfig, spec: &ChainSpec, chain: ChainHeader) -> Outcome {
    let (prediction, ratio_source) =
        match resolve_ratio(spec, DEFAULT_RATIONALIZE_TOL, DEFAULT_MAX_DEN) {
            Ok((ratio, source)) => (pst_predict(ratio, cfg.n), Some(source)),
            Err(refusal) => (PstPrediction::Refused(refusal), None),
        };
    let mut report = CheckPstReport {
        chain,
        ratio_source,
        prediction,
        time: None,
        time_value: None,
        verification: None,
    };
    if let Some(cert) = report.prediction.certificate() {
        let t = cert.time.for_spec(spec);
        report.time = Some(format_time(&cert.time, &cfg.alpha, &cfg.beta));
        report.time_value = Some(t);
        let data = analytic_eigenbasis(cfg.n);
        report.verification = Some(verify_mirror_inversion(&data, QuadraticQ::from(spec), t, cfg.tol));
    }
    let passed = report.verification.as_ref().is_some_and(|v| v.passed);
    Outcome {
        body: to_json(&report),
        passed,
    }
}

fn fr_prediction(cfg: &RunConfig, spec: &ChainSpec) -> (FrPrediction, Option<RatioSource>) {
    match resolve_ratio(spec, DEFAULT_RATIONALIZE_TOL, DEFAULT_MAX_DEN) {
        Ok((ratio, source)) => (fr_predict(ratio, cfg.n), Some(source)),
        Err(refusal) => (FrPrediction::Refused(refusal), None),
    }
}

fn check_fr(cfg: &RunConfig, spec: &ChainSpec, chain: ChainHeader) -> Outcome {
    let (prediction, ratio_source) = fr_prediction(cfg, spec);
    let mut report = CheckFrReport {
        chain,
        ratio_source,
        prediction,
        tau: None,
        tau_value: None,
        verification: None,
    };
    if let Some(cert) = report.prediction.certificate() {
        let t = cert.tau.for_spec(spec);
        report.tau = Some(format_time(&cert.tau, &cfg.alpha, &cfg.beta));
        report.tau_value = Some(t);
        let e = endpoint_state(&analytic_eigenbasis(cfg.n), QuadraticQ::from(spec), t);
        let (mu_abs, nu_abs) = (e.mu.norm(), e.nu.norm());
        let (expected_mu_abs, expected_nu_abs) = (cert.theta.cos().abs(), cert.theta.sin().abs());
        let max_deviation = (mu_abs - expected_mu_abs)
            .abs()
            .max((nu_abs - expected_nu_abs).abs())
            .max(e.leakage.abs());
        report.verification = Some(RevivalCheck {
            t,
            mu_abs,
            nu_abs,
            expected_mu_abs,
            expected_nu_abs,
            leakage: e.leakage,
            rel_phase: e.rel_phase,
            max_deviation,
            passed: max_deviation < cfg.tol,
        });
    }
    let passed = report.verification.as_ref().is_some_and(|v| v.passed);
    Outcome {
        body: to_json(&report),
        passed,
    }
}

fn cycle(cfg: &RunConfig, spec: &ChainSpec, chain: ChainHeader) -> Outcome {
    let (prediction, ratio_source) = fr_prediction(cfg, spec);
    let (tau, report) = match prediction.certificate() {
        Some(cert) => (
            Some(format_time(&cert.tau, &cfg.alpha, &cfg.beta)),
            Some(cycle_verify(spec, cert, cfg.tol)),
        ),
        None => (None, None),
    };
    let passed = report.as_ref().is_some_and(|r| r.passed);
    let out = CycleOutput {
        chain,
        ratio_source,
        prediction,
        tau,
        report,
    };
    Outcome {
        body: to_json(&out),
        passed,
    }
}

/// Writes `bytes` to a temporary file beside `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Re-reads a scan emitted in either format.
pub fn parse_series(text: &str, format: Format) -> Result<FidelitySeries, CliError> {
    Ok(match format {
        Format::Csv => FidelitySeries::from_csv(text)?,
        Format::Json => serde_json::from_str(text)
            .map_err(|e| pstchain::Error::Parse(format!("fidelity series: {e}")))?,
    })
}
