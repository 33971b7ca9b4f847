//! Single-excitation time evolution by spectral synthesis.
//!
//! Every propagator here is assembled as
//! `⟨k|e^{−itH}|l⟩ = Σ_s e^{−it Q(x_s)} W_sk W_sl`
//! from the eigenbasis of `J̄`; no matrix exponential is ever expanded.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::chain::{reflection_matrix, ChainSpec};
use crate::spectral::SpectralData;

pub type C64 = Complex<f64>;

/// Leakage below which a state counts as localized on the two end sites.
pub const ENDPOINT_LEAKAGE_TOL: f64 = 1e-9;

/// Coefficients of `Q(x) = α x² + β x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticQ {
    pub alpha: f64,
    pub beta: f64,
}

impl QuadraticQ {
    pub fn new(alpha: f64, beta: f64) -> Self {
        QuadraticQ { alpha, beta }
    }

    /// `Q(x) = x`, for spectral data that already holds the Hamiltonian's
    /// own eigenvalues.
    pub fn identity() -> Self {
        QuadraticQ::new(0.0, 1.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.alpha * x * x + self.beta * x
    }
}

impl From<&ChainSpec> for QuadraticQ {
    fn from(spec: &ChainSpec) -> Self {
        QuadraticQ::new(spec.alpha(), spec.beta())
    }
}

fn phases(data: &SpectralData, q: QuadraticQ, t: f64) -> Vec<C64> {
    data.eigenvalues
        .iter()
        .map(|&x| C64::from_polar(1.0, -t * q.eval(x)))
        .collect()
}

/// `⟨k|e^{−itH}|source⟩` for every site `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeVector {
    pub t: f64,
    pub source: usize,
    #[serde(with = "complex_pairs")]
    pub amps: Vec<C64>,
}

impl AmplitudeVector {
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

pub fn evolve(data: &SpectralData, q: QuadraticQ, t: f64, source: usize) -> AmplitudeVector {
    let size = data.n_sites();
    assert!(source < size, "source site {source} outside chain of {size} sites");
    let ph = phases(data, q, t);
    let w = &data.eigenvectors;
    let amps = (0..size)
        .map(|k| {
            (0..size)
                .map(|s| ph[s] * (w[(s, source)] * w[(s, k)]))
                .sum()
        })
        .collect();
    AmplitudeVector { t, source, amps }
}

/// Full `(N+1) × (N+1)` propagator `U(t)`.
pub fn propagator(data: &SpectralData, q: QuadraticQ, t: f64) -> DMatrix<C64> {
    let size = data.n_sites();
    let ph = phases(data, q, t);
    let w = &data.eigenvectors;
    DMatrix::from_fn(size, size, |k, l| {
        (0..size).map(|s| ph[s] * (w[(s, k)] * w[(s, l)])).sum()
    })
}

/// Amplitudes on the two end sites after evolving from site 0.
///
/// `theta` is `atan2(|ν|, |μ|)` in `[0, π/2]`; `phi` is the phase of the
/// dominant amplitude (of `μ` on a tie); `rel_phase = arg ν − arg μ` wrapped
/// to `(−π, π]`, present only when both amplitudes are non-negligible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointState {
    pub t: f64,
    #[serde(with = "complex_pair")]
    pub mu: C64,
    #[serde(with = "complex_pair")]
    pub nu: C64,
    pub leakage: f64,
    pub theta: f64,
    pub phi: f64,
    pub rel_phase: Option<f64>,
}

impl EndpointState {
    pub fn from_amplitudes(amps: &AmplitudeVector) -> Self {
        let mu = amps.amps[0];
        let nu = amps.amps[amps.amps.len() - 1];
        let (m, n) = (mu.norm(), nu.norm());
        let leakage = 1.0 - mu.norm_sqr() - nu.norm_sqr();
        let phi = if m >= n - 1e-9 { mu.arg() } else { nu.arg() };
        let rel_phase = (m > 1e-12 && n > 1e-12).then(|| wrap_phase(nu.arg() - mu.arg()));
        EndpointState {
            t: amps.t,
            mu,
            nu,
            leakage,
            theta: n.atan2(m),
            phi,
            rel_phase,
        }
    }

    /// All weight sits on sites 0 and N.
    pub fn is_localized(&self) -> bool {
        self.leakage < ENDPOINT_LEAKAGE_TOL
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

pub fn endpoint_state(data: &SpectralData, q: QuadraticQ, t: f64) -> EndpointState {
    EndpointState::from_amplitudes(&evolve(data, q, t, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorInversionReport {
    pub passed: bool,
    pub t: f64,
    pub phi: f64,
    pub max_deviation: f64,
}

/// Checks `U(T) = e^{iφ} R` entrywise, with `φ` read off `U_{N,0}`.
pub fn verify_mirror_inversion(
    data: &SpectralData,
    q: QuadraticQ,
    t: f64,
    tol: f64,
) -> MirrorInversionReport {
    let u = propagator(data, q, t);
    let big_n = data.chain_n();
    let phi = u[(big_n, 0)].arg();
    let target = reflection_matrix(big_n).map(|r| C64::from_polar(r, phi));
    let max_deviation = (u - target)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    MirrorInversionReport {
        passed: max_deviation < tol,
        t,
        phi,
        max_deviation,
    }
}

mod complex_pair {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

mod complex_pairs {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}
