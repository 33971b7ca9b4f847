//! Exact coupling ratios and continued-fraction rationalization.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A non-negative rational `p/q` in lowest terms, `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatio", into = "RawRatio")]
pub struct ExactRatio {
    p: i64,
    q: i64,
}

#[derive(Serialize, Deserialize)]
struct RawRatio {
    p: i64,
    q: i64,
}

impl TryFrom<RawRatio> for ExactRatio {
    type Error = Error;

    fn try_from(raw: RawRatio) -> Result<Self> {
        ExactRatio::new(raw.p, raw.q)
    }
}

impl From<ExactRatio> for RawRatio {
    fn from(r: ExactRatio) -> Self {
        RawRatio { p: r.p, q: r.q }
    }
}

impl ExactRatio {
    /// Rejects anything that is not already reduced, or has `q < 1` or `p < 0`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q < 1 || p < 0 || gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(ExactRatio { p, q })
    }

    /// Reduces `p/q` to lowest terms first.
    pub fn reduced(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::NotCoprime { p, q });
        }
        let g = gcd(p, q);
        let sign = if q < 0 { -1 } else { 1 };
        ExactRatio::new(sign * p / g, sign * q / g)
    }

    pub fn integer(p: i64) -> Result<Self> {
        ExactRatio::new(p, 1)
    }

    pub fn numer(&self) -> i64 {
        self.p
    }

    pub fn denom(&self) -> i64 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `self / other`, or `None` when `other` is zero or the result overflows.
    pub fn checked_div(&self, other: &ExactRatio) -> Option<ExactRatio> {
        if other.p == 0 {
            return None;
        }
        let p = i128::from(self.p) * i128::from(other.q);
        let q = i128::from(self.q) * i128::from(other.p);
        let g = gcd_i128(p, q);
        ExactRatio::new(i64::try_from(p / g).ok()?, i64::try_from(q / g).ok()?).ok()
    }
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for ExactRatio {
    type Err = Error;

    /// Accepts `"p"` or `"p/q"` with non-negative integers; the result is reduced.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |part: &str| -> Result<i64> {
            let part = part.trim();
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("not a non-negative integer: {part:?}")));
            }
            part.parse::<i64>()
                .map_err(|e| Error::Parse(format!("{part:?}: {e}")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let (p, q) = (parse(p)?, parse(q)?);
                if q == 0 {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                ExactRatio::reduced(p, q)
            }
            None => ExactRatio::integer(parse(s)?),
        }
    }
}

/// The ratio `α/β` that the transfer predicates work with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingRatio {
    /// `β > 0` and `α/β = p/q`.
    Finite(ExactRatio),
    /// `β = 0`: the Hamiltonian is `α J̄²` alone.
    PureQuadratic,
}

impl CouplingRatio {
    /// Purely nearest-neighbour chain (`α = 0`).
    pub fn is_nearest_neighbour(&self) -> bool {
        matches!(self, CouplingRatio::Finite(r) if r.is_zero())
    }
}

/// Outcome of [`rationalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rationalized {
    Exact(ExactRatio),
    /// No `p/q` with `q <= max_den` lies within the tolerance.
    NoCertificate,
}

pub const DEFAULT_RATIONALIZE_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_DEN: i64 = 10_000;

/// Smallest-denominator `p/q` with `|α/β − p/q| < tol` and `q <= max_den`.
///
/// Walks the Stern–Brocot tree towards `α/β`, taking whole continued-fraction
/// partial quotients per step, and stops at the first mediant that lands
/// strictly inside `(x − tol, x + tol)`. That mediant has the smallest
/// denominator of any fraction in the interval.
pub fn rationalize(alpha: f64, beta: f64, tol: f64, max_den: i64) -> Rationalized {
    assert!(beta > 0.0, "rationalize needs beta > 0");
    let x = alpha / beta;
    if !x.is_finite() || x < 0.0 || max_den < 1 {
        return Rationalized::NoCertificate;
    }
    let (lo, hi) = (x - tol, x + tol);
    if lo < 0.0 {
        return Rationalized::Exact(ExactRatio { p: 0, q: 1 });
    }
    // left = lp/lq <= lo, right = rp/rq >= hi (1/0 is +inf)
    let (mut lp, mut lq, mut rp, mut rq) = (0i64, 1i64, 1i64, 0i64);
    loop {
        let (mp, mq) = match (lp.checked_add(rp), lq.checked_add(rq)) {
            (Some(mp), Some(mq)) if mq <= max_den => (mp, mq),
            _ => return Rationalized::NoCertificate,
        };
        let m = mp as f64 / mq as f64;
        if m <= lo {
            // advance left by k copies of right while staying <= lo
            let denom = rp as f64 - lo * rq as f64;
            let k = if denom > 0.0 {
                ((lo * lq as f64 - lp as f64) / denom).floor()
            } else {
                f64::INFINITY
            };
            let k = step_count(k, lq, rq, max_den);
            match (advance(lp, k, rp), advance(lq, k, rq)) {
                (Some(p), Some(q)) => (lp, lq) = (p, q),
                _ => return Rationalized::NoCertificate,
            }
        } else if m >= hi {
            let denom = hi * lq as f64 - lp as f64;
            let k = if denom > 0.0 {
                ((rp as f64 - hi * rq as f64) / denom).floor()
            } else {
                f64::INFINITY
            };
            let k = step_count(k, rq, lq, max_den);
            match (advance(rp, k, lp), advance(rq, k, lq)) {
                (Some(p), Some(q)) => (rp, rq) = (p, q),
                _ => return Rationalized::NoCertificate,
            }
        } else {
            return Rationalized::Exact(ExactRatio { p: mp, q: mq });
        }
    }
}

fn advance(base: i64, k: i64, step: i64) -> Option<i64> {
    k.checked_mul(step)?.checked_add(base)
}

/// Clamps a bulk step so the moving endpoint's denominator cannot jump far
/// past `max_den` (the walk terminates as soon as it does). A zero `other_den`
/// means only the numerator moves.
fn step_count(k: f64, moving_den: i64, other_den: i64, max_den: i64) -> i64 {
    let cap = if other_den == 0 {
        i64::MAX / 8
    } else {
        (max_den - moving_den) / other_den + 1
    };
    if k.is_finite() {
        (k as i64).clamp(1, cap.max(1))
    } else {
        cap.max(1)
    }
}
