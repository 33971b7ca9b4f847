//! Run configuration assembled from defaults, `PSTCHAIN_TOL`, a JSON file
//! and command-line flags, in increasing order of precedence.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Param, TimeExpr};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_STEPS: usize = 1000;
pub const TOL_ENV_VAR: &str = "PSTCHAIN_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Couplings,
    Spectrum,
    Evolve,
    Scan,
    CheckPst,
    CheckFr,
    Cycle,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Couplings,
        Command::Spectrum,
        Command::Evolve,
        Command::Scan,
        Command::CheckPst,
        Command::CheckFr,
        Command::Cycle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Couplings => "couplings",
            Command::Spectrum => "spectrum",
            Command::Evolve => "evolve",
            Command::Scan => "scan",
            Command::CheckPst => "check-pst",
            Command::CheckFr => "check-fr",
            Command::Cycle => "cycle",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown command {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Parse(format!("unknown format {s:?}"))),
        }
    }
}

/// A JSON scalar that is either a number or an expression string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    fn to_param(&self) -> Result<Param> {
        match self {
            Scalar::Number(v) if v.fract() == 0.0 && *v >= 0.0 && *v < 1e15 => {
                Ok(Param::exact(crate::ratio::ExactRatio::integer(*v as i64)?))
            }
            Scalar::Number(v) => Param::float(*v),
            Scalar::Text(s) => s.parse(),
        }
    }

    fn to_time(&self) -> Result<TimeExpr> {
        match self {
            Scalar::Number(v) if v.is_finite() && *v >= 0.0 => Ok(TimeExpr::seconds(*v)),
            Scalar::Number(v) => Err(Error::Parse(format!("time must be finite and non-negative, got {v}"))),
            Scalar::Text(s) => s.parse(),
        }
    }
}

/// Any subset of the run settings. Both the JSON file and the flags parse
/// into this shape.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl PartialConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            command: over.command.or(self.command),
            n: over.n.or(self.n),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            t: over.t.or(self.t),
            t_max: over.t_max.or(self.t_max),
            steps: over.steps.or(self.steps),
            output: over.output.or(self.output),
            format: over.format.or(self.format),
            tol: over.tol.or(self.tol),
        }
    }
}

/// Validated settings for a single invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub alpha: Param,
    pub beta: Param,
    pub t: Option<TimeExpr>,
    pub t_max: Option<TimeExpr>,
    pub steps: usize,
    pub output: Option<PathBuf>,
    /// `None` lets the command pick: CSV for `scan`, JSON otherwise.
    pub format: Option<Format>,
    pub tol: f64,
}

/// Reads `PSTCHAIN_TOL` from an already-fetched environment value.
pub fn parse_env_tol(raw: Option<&str>) -> Result<Option<f64>> {
    raw.map(|s| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::Parse(format!("{TOL_ENV_VAR}={s:?}: {e}")))
    })
    .transpose()
}

impl RunConfig {
    /// Merges `file` then `flags` over the defaults, with `env_tol` sitting
    /// between the default tolerance and the file.
    pub fn resolve(env_tol: Option<f64>, file: PartialConfig, flags: PartialConfig) -> Result<Self> {
        let base = PartialConfig {
            tol: env_tol,
            ..PartialConfig::default()
        };
        let merged = base.overlay(file).overlay(flags);
        RunConfig::try_from(merged)
    }

    pub fn effective_format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Scan => Format::Csv,
            _ => Format::Json,
        })
    }
}

impl TryFrom<PartialConfig> for RunConfig {
    type Error = Error;

    fn try_from(c: PartialConfig) -> Result<Self> {
        let command = c
            .command
            .ok_or_else(|| Error::InvalidSpec("missing command".into()))?;
        let n = c.n.ok_or_else(|| Error::InvalidSpec("missing N".into()))?;
        if n < 1 {
            return Err(Error::InvalidSpec(format!("N must be at least 1, got {n}")));
        }
        let tol = c.tol.unwrap_or(DEFAULT_TOL);
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidSpec(format!("tol must be positive, got {tol}")));
        }
        let param = |s: Option<Scalar>, name: &str| -> Result<Param> {
            s.ok_or_else(|| Error::InvalidSpec(format!("missing {name}")))?
                .to_param()
        };
        let alpha = param(c.alpha, "alpha")?;
        let beta = param(c.beta, "beta")?;
        let steps = c.steps.unwrap_or(DEFAULT_STEPS);
        if steps == 0 {
            return Err(Error::InvalidSpec("steps must be positive".into()));
        }
        Ok(RunConfig {
            command,
            n: n as usize,
            alpha,
            beta,
            t: c.t.as_ref().map(Scalar::to_time).transpose()?,
            t_max: c.t_max.as_ref().map(Scalar::to_time).transpose()?,
            steps,
            output: c.output,
            format: c.format,
            tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ExactRatio;

    fn flags() -> PartialConfig {
        PartialConfig {
            command: Some(Command::CheckPst),
            n: Some(5),
            alpha: Some(Scalar::Text("1".into())),
            beta: Some(Scalar::Number(1.0)),
            ..Default::default()
        }
    }

    #[test]
    fn precedence() {
        let file = PartialConfig::from_json(r#"{"tol": 1e-6, "N": 3, "steps": 50}"#).unwrap();
        let c = RunConfig::resolve(Some(1e-4), file.clone(), flags()).unwrap();
        assert_eq!(c.tol, 1e-6);
        assert_eq!(c.n, 5);
        assert_eq!(c.steps, 50);
        let c = RunConfig::resolve(Some(1e-4), PartialConfig::default(), flags()).unwrap();
        assert_eq!(c.tol, 1e-4);
        let c = RunConfig::resolve(None, PartialConfig::default(), flags()).unwrap();
        assert_eq!(c.tol, DEFAULT_TOL);
        assert_eq!(c.alpha.exact, Some(ExactRatio::integer(1).unwrap()));
        assert_eq!(c.beta.exact, Some(ExactRatio::integer(1).unwrap()));
    }

    #[test]
    fn file_schema() {
        let f = PartialConfig::from_json(
            r#"{"command":"scan","N":5,"alpha":0,"beta":"1","t_max":"2pi","steps":100,"format":"csv","output":"out.csv"}"#,
        )
        .unwrap();
        let c = RunConfig::try_from(f).unwrap();
        assert_eq!(c.command, Command::Scan);
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.t_max.unwrap().pi_multiple, Some(ExactRatio::integer(2).unwrap()));
        assert!(PartialConfig::from_json(r#"{"bogus": 1}"#).is_err());
        assert!(PartialConfig::from_json(r#"{"command": "fly"}"#).is_err());
    }

    #[test]
    fn rejects() {
        let mut f = flags();
        f.command = None;
        assert!(RunConfig::try_from(f).is_err());
        let mut f = flags();
        f.n = Some(0);
        assert!(RunConfig::try_from(f).is_err());
        let mut f = flags();
        f.tol = Some(0.0);
        assert!(RunConfig::try_from(f).is_err());
        let mut f = flags();
        f.alpha = Some(Scalar::Number(-1.0));
        assert!(RunConfig::try_from(f).is_err());
        let mut f = flags();
        f.beta = Some(Scalar::Text("1/x".into()));
        assert!(RunConfig::try_from(f).is_err());
        assert!(parse_env_tol(Some("abc")).is_err());
        assert_eq!(parse_env_tol(Some(" 1e-5 ")).unwrap(), Some(1e-5));
    }

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.name()));
        }
    }
}
