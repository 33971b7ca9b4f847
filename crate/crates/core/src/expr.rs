//! Parsing of command-line parameters and time expressions.
//!
//! Coupling strengths are `"p/q"`, `"p"` (exact) or a decimal literal.
//! Times are a decimal literal or a multiple of π such as `"pi"`, `"pi/2"`,
//! `"2pi"`, `"3*pi/4"` or `"0.5pi"`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::ExactRatio;

/// A non-negative coupling strength, exact when it was written as a fraction
/// or an integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Param {
    pub value: f64,
    pub exact: Option<ExactRatio>,
}

impl Param {
    pub fn exact(r: ExactRatio) -> Self {
        Param {
            value: r.to_f64(),
            exact: Some(r),
        }
    }

    pub fn float(value: f64) -> Result<Self> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Parse(format!(
                "parameter must be finite and non-negative, got {value}"
            )));
        }
        Ok(Param { value, exact: None })
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty parameter".into()));
        }
        if s.starts_with('-') {
            return Err(Error::Parse(format!("parameter must be non-negative, got {s:?}")));
        }
        if s.contains('/') || s.bytes().all(|b| b.is_ascii_digit()) {
            return s.parse::<ExactRatio>().map(Param::exact);
        }
        Param::float(parse_decimal(s)?)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// Plain decimal literal: digits, optional fraction and exponent, no sign,
/// no `inf`/`nan`.
fn parse_decimal(s: &str) -> Result<f64> {
    let ok = !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'-' | b'+'))
        && s.as_bytes()[0] != b'-'
        && s.as_bytes()[0] != b'+'
        && s.bytes().any(|b| b.is_ascii_digit());
    if !ok {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    let v: f64 = s
        .parse()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("not a finite number: {s:?}")));
    }
    Ok(v)
}

/// A non-negative time, carrying its exact π-multiple when known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeExpr {
    pub value: f64,
    pub pi_multiple: Option<ExactRatio>,
}

impl TimeExpr {
    pub fn pi_times(r: ExactRatio) -> Self {
        TimeExpr {
            value: r.to_f64() * PI,
            pi_multiple: Some(r),
        }
    }

    pub fn seconds(value: f64) -> Self {
        TimeExpr {
            value,
            pi_multiple: None,
        }
    }
}

impl fmt::Display for TimeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_multiple {
            Some(r) => f.write_str(&format_pi_multiple(r)),
            None => write!(f, "{}", self.value),
        }
    }
}

/// `"0"`, `"pi"`, `"2pi"`, `"pi/2"`, `"3pi/4"`.
pub fn format_pi_multiple(r: ExactRatio) -> String {
    match (r.numer(), r.denom()) {
        (0, _) => "0".to_string(),
        (1, 1) => "pi".to_string(),
        (p, 1) => format!("{p}pi"),
        (1, q) => format!("pi/{q}"),
        (p, q) => format!("{p}pi/{q}"),
    }
}

impl FromStr for TimeExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        let (head, tail) = match lower.find("pi") {
            Some(i) => (&lower[..i], &lower[i + 2..]),
            None => match lower.find('π') {
                Some(i) => (&lower[..i], &lower[i + 'π'.len_utf8()..]),
                None => {
                    let v = parse_decimal(s)?;
                    return Ok(if v == 0.0 {
                        TimeExpr::pi_times(ExactRatio::integer(0)?)
                    } else {
                        TimeExpr::seconds(v)
                    });
                }
            },
        };
        let head = head.trim().trim_end_matches('*').trim();
        let tail = tail.trim();

        enum Coef {
            Exact(i64),
            Float(f64),
        }
        let coef = if head.is_empty() {
            Coef::Exact(1)
        } else if head.bytes().all(|b| b.is_ascii_digit()) {
            Coef::Exact(
                head.parse()
                    .map_err(|e| Error::Parse(format!("{head:?}: {e}")))?,
            )
        } else {
            Coef::Float(parse_decimal(head)?)
        };
        let denom = if tail.is_empty() {
            Coef::Exact(1)
        } else {
            let d = tail
                .strip_prefix('/')
                .ok_or_else(|| Error::Parse(format!("unexpected {tail:?} after pi in {s:?}")))?
                .trim();
            if d.bytes().all(|b| b.is_ascii_digit()) && !d.is_empty() {
                Coef::Exact(d.parse().map_err(|e| Error::Parse(format!("{d:?}: {e}")))?)
            } else {
                Coef::Float(parse_decimal(d)?)
            }
        };
        match (coef, denom) {
            (_, Coef::Exact(0)) => Err(Error::Parse(format!("zero denominator in {s:?}"))),
            (Coef::Exact(p), Coef::Exact(q)) => Ok(TimeExpr::pi_times(ExactRatio::reduced(p, q)?)),
            (c, d) => {
                let as_f = |c: Coef| match c {
                    Coef::Exact(v) => v as f64,
                    Coef::Float(v) => v,
                };
                let value = as_f(c) * PI / as_f(d);
                if !value.is_finite() {
                    return Err(Error::Parse(format!("time {s:?} is not finite")));
                }
                Ok(TimeExpr::seconds(value))
            }
        }
    }
}
