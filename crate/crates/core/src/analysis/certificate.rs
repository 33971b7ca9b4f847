//! Integer certificates for perfect state transfer and fractional revival on
//! the quadratic Krawtchouk chain `α J̄² + β J̄`.
//!
//! With `x_s = s − N/2`, transfer at time `T` needs
//! `T Q(x_s) = −φ + π(N + s + 2L_s)` for integers `L_s = ξ s² + η s + ζ`;
//! `ξ`, `η` must be both integers or both half-integers. Revival needs two
//! such integer sequences, one per parity of `s`, which forces integer
//! `ξ_0`, `η_0`. All predicate logic below is exact integer arithmetic on
//! `(p, q, N)` where `α/β = p/q`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::ratio::{rationalize, CouplingRatio, ExactRatio, Rationalized};

/// A number that is an integer or a half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HalfIntJson", into = "HalfIntJson")]
pub struct HalfInt(i64);

#[derive(Serialize, Deserialize)]
struct HalfIntJson {
    num: i64,
    den: i64,
}

impl TryFrom<HalfIntJson> for HalfInt {
    type Error = String;

    fn try_from(j: HalfIntJson) -> Result<Self, String> {
        match j.den {
            1 => j
                .num
                .checked_mul(2)
                .map(HalfInt)
                .ok_or_else(|| "half-integer overflows".to_string()),
            2 if j.num % 2 != 0 => Ok(HalfInt(j.num)),
            _ => Err(format!("{}/{} is not a reduced half-integer", j.num, j.den)),
        }
    }
}

impl From<HalfInt> for HalfIntJson {
    fn from(h: HalfInt) -> Self {
        if h.is_integer() {
            HalfIntJson { num: h.0 / 2, den: 1 }
        } else {
            HalfIntJson { num: h.0, den: 2 }
        }
    }
}

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn integer(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub fn twice(&self) -> i64 {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Unit that a predicted time is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeScale {
    PiOverBeta,
    PiOverAlpha,
}

/// `factor · π/β` or `factor · π/α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedTime {
    pub factor: ExactRatio,
    pub scale: TimeScale,
}

impl PredictedTime {
    pub fn value(&self, alpha: f64, beta: f64) -> f64 {
        let unit = match self.scale {
            TimeScale::PiOverBeta => PI / beta,
            TimeScale::PiOverAlpha => PI / alpha,
        };
        self.factor.to_f64() * unit
    }

    pub fn for_spec(&self, spec: &ChainSpec) -> f64 {
        self.value(spec.alpha(), spec.beta())
    }

    fn times(&self, k: i64) -> PredictedTime {
        let f = self.factor;
        PredictedTime {
            factor: ExactRatio::reduced(f.numer() * k, f.denom()).expect("positive factor"),
            scale: self.scale,
        }
    }
}

/// The condition that ruled out a transfer or revival.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    /// `p` odd but `q` and `N` have different parity.
    ParityMismatch { p: i64, q: i64, n: usize },
    /// `p` even: transfer is possible but revival is not.
    EvenNumerator { p: i64, q: i64 },
    /// `α = 0`: the nearest-neighbour chain only transfers or returns.
    NearestNeighbourOnly { n: usize },
    /// `β = 0` with odd `N`.
    OddChainPureQuadratic { n: usize },
    /// `α/β` has no rational approximation within tolerance.
    NoRationalCertificate { estimate: f64, tol: f64, max_den: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ParityMismatch { p, q, n } => write!(
                f,
                "parity mismatch: p = {p} is odd but q = {q} is {} while N = {n} is {}",
                parity_name(*q),
                parity_name(*n as i64)
            ),
            Violation::EvenNumerator { p, q } => {
                write!(f, "alpha/beta = {p}/{q} has even numerator: no fractional revival")
            }
            Violation::NearestNeighbourOnly { n } => write!(
                f,
                "nearest-neighbour chain (alpha = 0, N = {n}) only shows transfer and return"
            ),
            Violation::OddChainPureQuadratic { n } => {
                write!(f, "beta = 0 requires even N, got N = {n}")
            }
            Violation::NoRationalCertificate { estimate, tol, max_den } => write!(
                f,
                "alpha/beta = {estimate} has no rational certificate (tol {tol:e}, max denominator {max_den}); treated as irrational"
            ),
        }
    }
}

fn parity_name(v: i64) -> &'static str {
    if v % 2 == 0 {
        "even"
    } else {
        "odd"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refusal {
    #[serde(flatten)]
    pub violation: Violation,
    pub message: String,
}

impl From<Violation> for Refusal {
    fn from(violation: Violation) -> Self {
        Refusal {
            message: violation.to_string(),
            violation,
        }
    }
}

/// Which admissible branch produced a transfer certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PstCase {
    /// `α = 0`.
    NearestNeighbour,
    /// `p` even, `q` odd: integer `ξ`, `η`.
    EvenNumerator,
    /// `p` odd with `q`, `N` of equal parity: half-integer `ξ`, `η`.
    OddNumeratorMatchedParity,
    /// `β = 0`, `N` even.
    PureQuadraticEvenChain,
}

/// Witness `(ξ, η)` that the quadratic phase condition is solvable, and the
/// transfer time it yields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PstCertificate {
    pub n: usize,
    pub ratio: CouplingRatio,
    pub xi: HalfInt,
    pub eta: HalfInt,
    pub time: PredictedTime,
    pub case: PstCase,
    /// Odd multiple of the minimal time this certificate describes.
    pub multiplier: u32,
}

impl PstCertificate {
    /// The certificate for `(2l+1)` times the minimal transfer time.
    pub fn repeated(&self, l: u32) -> PstCertificate {
        let m = 2 * i64::from(l) + 1;
        let n = self.n as i64;
        let (xi, eta, factor) = match self.ratio {
            CouplingRatio::Finite(r) => {
                let x = m * r.numer();
                (x, m * r.denom() - n * x - 1, m * r.denom())
            }
            CouplingRatio::PureQuadratic => (m, -m * n - 1, m),
        };
        PstCertificate {
            xi: HalfInt::from_twice(xi),
            eta: HalfInt::from_twice(eta),
            time: PredictedTime {
                factor: ExactRatio::integer(factor).expect("positive factor"),
                scale: self.time.scale,
            },
            multiplier: 2 * l + 1,
            ..self.clone()
        }
    }

    /// Re-derives every certificate invariant in exact arithmetic.
    pub fn is_consistent(&self) -> bool {
        let (x, e) = (i128::from(self.xi.twice()), i128::from(self.eta.twice()));
        let n = self.n as i128;
        if self.xi.is_integer() != self.eta.is_integer() {
            return false;
        }
        let m = i128::from(self.multiplier);
        let f = self.time.factor;
        match self.ratio {
            CouplingRatio::Finite(r) => {
                let (p, q) = (i128::from(r.numer()), i128::from(r.denom()));
                // N ξ + η + 1/2 = m q / 2, and T = m q π / β
                let time_ok = self.time.scale == TimeScale::PiOverBeta
                    && i128::from(f.numer()) == m * q
                    && f.denom() == 1;
                // β/α = (2η + 1)/(2ξ) + N  <=>  q · 2ξ = p (2η + 1) + N p · 2ξ
                let ratio_ok = p == 0 || q * x == p * (e + 1) + n * p * x;
                n * x + e + 1 == m * q && time_ok && ratio_ok
            }
            CouplingRatio::PureQuadratic => {
                // 2η + 1 = −2ξN and T = 2πξ/α
                e + 1 == -x * n
                    && self.time.scale == TimeScale::PiOverAlpha
                    && i128::from(f.numer()) == x
                    && f.denom() == 1
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PstPrediction {
    Certified(PstCertificate),
    Refused(Refusal),
    NotApplicable { reason: String },
}

impl PstPrediction {
    pub fn certificate(&self) -> Option<&PstCertificate> {
        match self {
            PstPrediction::Certified(c) => Some(c),
            _ => None,
        }
    }
}

const TWO_SITE_REASON: &str = "N = 1: the squared two-site matrix is a multiple of the identity, \
     so the quadratic phase conditions are underdetermined";

/// Minimal-time transfer certificate for `α/β = p/q` (or `β = 0`) on `N + 1` sites.
pub fn pst_predict(ratio: CouplingRatio, n: usize) -> PstPrediction {
    assert!(n >= 1, "chain needs at least two sites");
    let ni = n as i64;
    let (xi, eta, time, case) = match ratio {
        CouplingRatio::Finite(r) => {
            let (p, q) = (r.numer(), r.denom());
            if p > 0 && n == 1 {
                return PstPrediction::NotApplicable {
                    reason: TWO_SITE_REASON.into(),
                };
            }
            let case = if p == 0 {
                PstCase::NearestNeighbour
            } else if p % 2 == 0 {
                PstCase::EvenNumerator
            } else if (q - ni) % 2 == 0 {
                PstCase::OddNumeratorMatchedParity
            } else {
                return PstPrediction::Refused(Violation::ParityMismatch { p, q, n }.into());
            };
            let time = PredictedTime {
                factor: ExactRatio::integer(q).expect("q >= 1"),
                scale: TimeScale::PiOverBeta,
            };
            // ξ = p/2, η = (q − Np − 1)/2
            (p, q - ni * p - 1, time, case)
        }
        CouplingRatio::PureQuadratic => {
            if n % 2 == 1 {
                return PstPrediction::Refused(Violation::OddChainPureQuadratic { n }.into());
            }
            let time = PredictedTime {
                factor: ExactRatio::integer(1).expect("1"),
                scale: TimeScale::PiOverAlpha,
            };
            // ξ = 1/2, 2η + 1 = −N
            (1, -ni - 1, time, PstCase::PureQuadraticEvenChain)
        }
    };
    let cert = PstCertificate {
        n,
        ratio,
        xi: HalfInt::from_twice(xi),
        eta: HalfInt::from_twice(eta),
        time,
        case,
        multiplier: 1,
    };
    debug_assert!(cert.is_consistent(), "{cert:?}");
    PstPrediction::Certified(cert)
}

/// Value of `cos θ`, `sin θ` up to sign, as fixed by the revival conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaClass {
    /// `θ ≡ 0 (mod π)`: the excitation is back on site 0.
    Return,
    /// `θ ≡ ±π/4 (mod π)`: `|μ| = |ν| = 1/√2`.
    Balanced,
    /// `θ ≡ π/2 (mod π)`: perfect transfer.
    Pst,
}

/// Classifies `θ = (−1)^N π (ξ_0/4 + η_0/2 + δζ)` by `|cos θ|`, `|sin θ|`.
///
/// In units of `π/4`, `θ = ±(ξ_0 + 2η_0 + 4δζ)`, so only
/// `(ξ_0 + 2η_0) mod 4` matters.
pub fn theta_class(xi0: i64, eta0: i64, delta_zeta: i64) -> ThetaClass {
    let quarters = (i128::from(xi0) + 2 * i128::from(eta0) + 4 * i128::from(delta_zeta)).rem_euclid(4);
    match quarters {
        0 => ThetaClass::Return,
        2 => ThetaClass::Pst,
        _ => ThetaClass::Balanced,
    }
}

/// Signed revival angle `(−1)^N π (ξ_0/4 + η_0/2 + δζ)`.
pub fn theta_value(n: usize, xi0: i64, eta0: i64, delta_zeta: i64) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * PI * ((xi0 + 2 * eta0 + 4 * delta_zeta) as f64 / 4.0)
}

/// Witness `(ξ_0, η_0)` for revival at sites 0 and N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrCertificate {
    pub n: usize,
    pub ratio: CouplingRatio,
    pub xi0: i64,
    pub eta0: i64,
    /// `ζ_0 − ζ_1`, chosen so that `θ/π` lies in `[0, 1)` up to the sign `(−1)^N`.
    pub delta_zeta: i64,
    pub tau: PredictedTime,
    pub theta: f64,
    pub theta_class: ThetaClass,
    /// Multiple of the minimal revival time.
    pub multiplier: u32,
}

impl FrCertificate {
    fn build(n: usize, ratio: CouplingRatio, xi0: i64, eta0: i64, tau: PredictedTime, multiplier: u32) -> Self {
        let delta_zeta = -(xi0 + 2 * eta0).div_euclid(4);
        FrCertificate {
            n,
            ratio,
            xi0,
            eta0,
            delta_zeta,
            tau,
            theta: theta_value(n, xi0, eta0, delta_zeta),
            theta_class: theta_class(xi0, eta0, delta_zeta),
            multiplier,
        }
    }

    /// `(ξ_0, η_0) → (k ξ_0, k η_0)`: same Hamiltonian, time `k τ`.
    pub fn scaled(&self, k: u32) -> FrCertificate {
        assert!(k >= 1, "scale factor must be positive");
        let ki = i64::from(k);
        FrCertificate::build(
            self.n,
            self.ratio,
            self.xi0 * ki,
            self.eta0 * ki,
            self.tau.times(ki),
            self.multiplier * k,
        )
    }

    /// Re-derives the certificate invariants in exact arithmetic.
    pub fn is_consistent(&self) -> bool {
        let n = self.n as i128;
        let (x, e) = (i128::from(self.xi0), i128::from(self.eta0));
        let f = self.tau.factor;
        let (fp, fq) = (i128::from(f.numer()), i128::from(f.denom()));
        let class_ok = self.theta_class == theta_class(self.xi0, self.eta0, self.delta_zeta);
        let parity_ok = (self.theta_class == ThetaClass::Balanced) == (x % 2 != 0);
        match self.ratio {
            CouplingRatio::Finite(r) => {
                let (p, q) = (i128::from(r.numer()), i128::from(r.denom()));
                // τ = (π/β)(η_0 + N ξ_0/2)  and  α/β = ξ_0 / (2η_0 + N ξ_0)
                self.tau.scale == TimeScale::PiOverBeta
                    && 2 * fp == fq * (2 * e + n * x)
                    && p * (2 * e + n * x) == q * x
                    && class_ok
                    && parity_ok
            }
            CouplingRatio::PureQuadratic => {
                // τ = π ξ_0 / (2α),  η_0 = −N ξ_0 / 2
                self.tau.scale == TimeScale::PiOverAlpha
                    && 2 * fp == fq * x
                    && 2 * e == -n * x
                    && class_ok
                    && parity_ok
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FrPrediction {
    Certified(FrCertificate),
    Refused(Refusal),
    NotApplicable { reason: String },
}

impl FrPrediction {
    pub fn certificate(&self) -> Option<&FrCertificate> {
        match self {
            FrPrediction::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// Minimal-time balanced revival certificate.
///
/// `β > 0`: requires `p` odd and `q ≡ N (mod 2)`; then `ξ_0 = p`,
/// `η_0 = (q − Np)/2` and `τ = πq/(2β)`. `β = 0`: requires even `N`, with
/// `τ = π/(2α)`.
pub fn fr_predict(ratio: CouplingRatio, n: usize) -> FrPrediction {
    assert!(n >= 1, "chain needs at least two sites");
    let ni = n as i64;
    match ratio {
        CouplingRatio::PureQuadratic => {
            if n % 2 == 1 {
                return FrPrediction::Refused(Violation::OddChainPureQuadratic { n }.into());
            }
            let tau = PredictedTime {
                factor: ExactRatio::new(1, 2).expect("1/2"),
                scale: TimeScale::PiOverAlpha,
            };
            FrPrediction::Certified(FrCertificate::build(n, ratio, 1, -ni / 2, tau, 1))
        }
        CouplingRatio::Finite(_) if n == 1 => FrPrediction::NotApplicable {
            reason: TWO_SITE_REASON.into(),
        },
        CouplingRatio::Finite(r) => {
            let (p, q) = (r.numer(), r.denom());
            if p == 0 {
                return FrPrediction::Refused(Violation::NearestNeighbourOnly { n }.into());
            }
            if p % 2 == 0 {
                return FrPrediction::Refused(Violation::EvenNumerator { p, q }.into());
            }
            if (q - ni) % 2 != 0 {
                return FrPrediction::Refused(Violation::ParityMismatch { p, q, n }.into());
            }
            let tau = PredictedTime {
                factor: ExactRatio::reduced(q, 2).expect("q >= 1"),
                scale: TimeScale::PiOverBeta,
            };
            let cert = FrCertificate::build(n, ratio, p, (q - ni * p) / 2, tau, 1);
            debug_assert!(cert.is_consistent(), "{cert:?}");
            FrPrediction::Certified(cert)
        }
    }
}

/// Where the exact `α/β` used by the predicates came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioSource {
    /// Supplied exactly with the chain.
    Exact,
    /// Recovered by [`rationalize`] from floating-point parameters.
    Rationalized { tol: f64, max_den: i64 },
    /// `β = 0`.
    PureQuadratic,
}

/// Exact ratio for a chain: the attached one if present, otherwise the
/// continued-fraction rationalization of `α/β`. `Err` carries the refusal
/// used when no certificate exists.
pub fn resolve_ratio(spec: &ChainSpec, tol: f64, max_den: i64) -> Result<(CouplingRatio, RatioSource), Refusal> {
    if let Some(r) = spec.ratio() {
        return Ok((r, RatioSource::Exact));
    }
    if spec.beta() == 0.0 {
        return Ok((CouplingRatio::PureQuadratic, RatioSource::PureQuadratic));
    }
    match rationalize(spec.alpha(), spec.beta(), tol, max_den) {
        Rationalized::Exact(r) => Ok((
            CouplingRatio::Finite(r),
            RatioSource::Rationalized { tol, max_den },
        )),
        Rationalized::NoCertificate => Err(Violation::NoRationalCertificate {
            estimate: spec.alpha() / spec.beta(),
            tol,
            max_den,
        }
        .into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite(p: i64, q: i64) -> CouplingRatio {
        CouplingRatio::Finite(ExactRatio::new(p, q).unwrap())
    }

    #[test]
    fn pst_examples() {
        let c = pst_predict(finite(1, 1), 5);
        let c = c.certificate().unwrap();
        assert_eq!(c.time.factor, ExactRatio::integer(1).unwrap());
        assert_eq!(c.time.scale, TimeScale::PiOverBeta);
        assert_eq!(c.xi, HalfInt::from_twice(1));
        assert_eq!(c.eta, HalfInt::from_twice(-5));
        assert!(c.is_consistent());

        let c = pst_predict(finite(2, 1), 4);
        let c = c.certificate().unwrap();
        assert_eq!(c.case, PstCase::EvenNumerator);
        assert!(c.xi.is_integer() && c.eta.is_integer());
        assert_eq!((c.xi, c.eta), (HalfInt::integer(1), HalfInt::integer(-4)));

        assert!(matches!(
            pst_predict(finite(1, 1), 4),
            PstPrediction::Refused(Refusal { violation: Violation::ParityMismatch { p: 1, q: 1, n: 4 }, .. })
        ));

        let c = pst_predict(CouplingRatio::PureQuadratic, 4);
        let c = c.certificate().unwrap();
        assert_eq!(c.time.scale, TimeScale::PiOverAlpha);
        assert_eq!(c.time.value(1.0, 0.0), PI);
        assert!(matches!(pst_predict(CouplingRatio::PureQuadratic, 5), PstPrediction::Refused(_)));

        let c = pst_predict(finite(1, 2), 4);
        assert_eq!(c.certificate().unwrap().time.value(1.0, 2.0), PI);
    }

    #[test]
    fn nearest_neighbour_always_transfers() {
        for n in 1..=12 {
            let c = pst_predict(finite(0, 1), n);
            let c = c.certificate().unwrap();
            assert_eq!(c.case, PstCase::NearestNeighbour);
            assert_eq!(c.time.value(0.0, 1.0), PI);
        }
    }

    #[test]
    fn two_site_chain_is_flagged() {
        assert!(matches!(pst_predict(finite(1, 2), 1), PstPrediction::NotApplicable { .. }));
        assert!(matches!(fr_predict(finite(0, 1), 1), FrPrediction::NotApplicable { .. }));
        assert!(matches!(fr_predict(finite(1, 1), 1), FrPrediction::NotApplicable { .. }));
    }

    /// Brute-force oracle for the admissibility rules: search small `(ξ, η)`
    /// half-integer pairs satisfying `T = 2π(Nξ + η + 1/2)/β` minimal and the
    /// ratio relation.
    fn pst_minimal_factor_brute(p: i64, q: i64, n: i64) -> Option<i64> {
        // twice values X = 2ξ, E = 2η with X ≡ E (mod 2); T·β/π = N X + E + 1;
        // ratio: q X = p (E + 1) + N p X
        let mut best: Option<i64> = None;
        for x in -60..=60i64 {
            for e in -400..=400i64 {
                if (x - e) % 2 != 0 {
                    continue;
                }
                if q * x != p * (e + 1) + n * p * x {
                    continue;
                }
                let f = n * x + e + 1;
                if f > 0 && best.is_none_or(|b| f < b) {
                    best = Some(f);
                }
            }
        }
        best
    }

    #[test]
    fn pst_rules_match_brute_force() {
        for n in 2..=9i64 {
            for p in 1..=6i64 {
                for q in 1..=6i64 {
                    if crate::ratio::gcd(p, q) != 1 {
                        continue;
                    }
                    let got = pst_predict(finite(p, q), n as usize);
                    let brute = pst_minimal_factor_brute(p, q, n);
                    match (got.certificate(), brute) {
                        (Some(c), Some(f)) => assert_eq!(c.time.factor.numer(), f, "p={p} q={q} N={n}"),
                        (None, None) => {}
                        (c, b) => panic!("p={p} q={q} N={n}: predicate {c:?} vs brute {b:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn repeated_pst_certificates() {
        for (ratio, n) in [(finite(1, 1), 5), (finite(2, 3), 4), (finite(3, 2), 6), (CouplingRatio::PureQuadratic, 4), (finite(0, 1), 3)] {
            let c = pst_predict(ratio, n);
            let c = c.certificate().unwrap();
            for l in 0..5 {
                let r = c.repeated(l);
                assert!(r.is_consistent(), "{r:?}");
                assert_eq!(r.time.factor.numer(), c.time.factor.numer() * i64::from(2 * l + 1));
                assert_eq!(r.repeated(0), c.repeated(0));
            }
        }
    }

    #[test]
    fn fr_examples() {
        let c = fr_predict(finite(1, 1), 5);
        let c = c.certificate().unwrap();
        assert_eq!(c.theta_class, ThetaClass::Balanced);
        assert_eq!(c.tau.value(1.0, 1.0), PI / 2.0);
        assert!(c.is_consistent());

        for n in 1..=8 {
            assert!(fr_predict(finite(2, 1), n).certificate().is_none());
        }
        assert!(matches!(
            fr_predict(finite(0, 1), 6),
            FrPrediction::Refused(Refusal { violation: Violation::NearestNeighbourOnly { n: 6 }, .. })
        ));
        assert!(matches!(
            fr_predict(finite(1, 1), 4),
            FrPrediction::Refused(Refusal { violation: Violation::ParityMismatch { .. }, .. })
        ));
        let c = fr_predict(CouplingRatio::PureQuadratic, 4);
        assert_eq!(c.certificate().unwrap().tau.value(1.0, 0.0), PI / 2.0);
        assert!(fr_predict(CouplingRatio::PureQuadratic, 5).certificate().is_none());
    }

    #[test]
    fn fr_time_is_half_pst_time() {
        for n in 2..=10 {
            for p in 0..=7i64 {
                for q in 1..=7i64 {
                    if crate::ratio::gcd(p, q) != 1 {
                        continue;
                    }
                    let ratio = finite(p, q);
                    if let Some(fr) = fr_predict(ratio, n).certificate() {
                        let pst = pst_predict(ratio, n);
                        let pst = pst.certificate().expect("revival implies transfer");
                        assert_eq!(fr.tau.times(2), pst.time);
                        assert!(fr.is_consistent());
                    }
                }
            }
            if let Some(fr) = fr_predict(CouplingRatio::PureQuadratic, n).certificate() {
                let pst = pst_predict(CouplingRatio::PureQuadratic, n);
                assert_eq!(fr.tau.times(2), pst.certificate().unwrap().time);
            }
        }
    }

    #[test]
    fn theta_classes_over_zeta() {
        use std::collections::HashSet;
        let mut all = HashSet::new();
        for xi0 in -9..=9i64 {
            for eta0 in -9..=9i64 {
                let classes: HashSet<_> = (-4..=4).map(|dz| theta_class(xi0, eta0, dz)).collect();
                // δζ shifts θ by multiples of π, which does not change |cos θ|
                assert_eq!(classes.len(), 1);
                let c = *classes.iter().next().unwrap();
                if xi0 % 2 != 0 {
                    assert_eq!(c, ThetaClass::Balanced);
                } else {
                    assert_ne!(c, ThetaClass::Balanced);
                }
                all.insert(c);
                // the class agrees with the signed angle
                let th = theta_value(3, xi0, eta0, 0);
                let (ca, sa) = (th.cos().abs(), th.sin().abs());
                match c {
                    ThetaClass::Return => assert!((ca - 1.0).abs() < 1e-12),
                    ThetaClass::Pst => assert!((sa - 1.0).abs() < 1e-12),
                    ThetaClass::Balanced => assert!((ca - sa).abs() < 1e-12),
                }
            }
        }
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn scaling_cycles_through_classes() {
        let c = fr_predict(finite(1, 1), 5);
        let c = c.certificate().unwrap();
        let classes: Vec<_> = (1..=4).map(|k| c.scaled(k).theta_class).collect();
        assert_eq!(
            classes,
            vec![ThetaClass::Balanced, ThetaClass::Pst, ThetaClass::Balanced, ThetaClass::Return]
        );
        for k in 1..=8 {
            assert!(c.scaled(k).is_consistent());
        }
    }

    #[test]
    fn certificates_round_trip_json() {
        let pst = pst_predict(finite(3, 5), 7);
        let text = serde_json::to_string(&pst).unwrap();
        assert!(text.contains("\"xi\":{\"num\":3,\"den\":2}"));
        assert_eq!(serde_json::from_str::<PstPrediction>(&text).unwrap(), pst);

        let fr = fr_predict(finite(3, 5), 7);
        let text = serde_json::to_string(&fr).unwrap();
        assert_eq!(serde_json::from_str::<FrPrediction>(&text).unwrap(), fr);

        let refusal = fr_predict(finite(1, 1), 4);
        let v = serde_json::to_value(&refusal).unwrap();
        assert_eq!(v["outcome"], "refused");
        assert_eq!(v["condition"], "parity_mismatch");
        assert_eq!(serde_json::from_value::<FrPrediction>(v).unwrap(), refusal);

        assert!(serde_json::from_str::<HalfInt>(r#"{"num":2,"den":2}"#).is_err());
        assert!(serde_json::from_str::<HalfInt>(r#"{"num":1,"den":3}"#).is_err());
        assert_eq!(serde_json::from_str::<HalfInt>(r#"{"num":-3,"den":1}"#).unwrap(), HalfInt::integer(-3));
    }

    #[test]
    fn ratio_resolution() {
        let spec = ChainSpec::new(5, 1.5, 1.0).unwrap();
        let (r, src) = resolve_ratio(&spec, 1e-9, 10_000).unwrap();
        assert_eq!(r, finite(3, 2));
        assert!(matches!(src, RatioSource::Rationalized { .. }));

        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let spec = ChainSpec::new(5, golden, 1.0).unwrap();
        let err = resolve_ratio(&spec, 1e-9, 10_000).unwrap_err();
        assert!(matches!(err.violation, Violation::NoRationalCertificate { .. }));

        let spec = ChainSpec::new(4, 1.0, 0.0).unwrap();
        assert_eq!(resolve_ratio(&spec, 1e-9, 10_000).unwrap().0, CouplingRatio::PureQuadratic);
    }
}
