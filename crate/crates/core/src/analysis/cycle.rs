use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use serde::{Deserialize, Serialize};

use super::certificate::FrCertificate;
use crate::chain::ChainSpec;
use crate::dynamics::{endpoint_state, QuadraticQ};
use crate::spectral::analytic_eigenbasis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseKind {
    Revival,
    Transfer,
    Return,
}

/// Measured end-site amplitudes at one point of the revival cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseCheck {
    pub kind: PhaseKind,
    /// Multiple of `τ`.
    pub k: u32,
    pub t: f64,
    pub mu_abs: f64,
    pub nu_abs: f64,
    pub leakage: f64,
    pub rel_phase: Option<f64>,
    /// Largest deviation from the ideal amplitudes for this phase.
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub tau: f64,
    pub tol: f64,
    pub phases: Vec<PhaseCheck>,
    pub passed: bool,
}

/// Balanced revival at `τ` and `3τ`, transfer at `2τ`, return at `4τ`.
pub fn cycle_verify(spec: &ChainSpec, cert: &FrCertificate, tol: f64) -> CycleReport {
    let data = analytic_eigenbasis(spec.n());
    let q = QuadraticQ::from(spec);
    let tau = cert.tau.for_spec(spec);
    let phases: Vec<PhaseCheck> = [
        (1, PhaseKind::Revival),
        (2, PhaseKind::Transfer),
        (3, PhaseKind::Revival),
        (4, PhaseKind::Return),
    ]
    .into_iter()
    .map(|(k, kind)| {
        let t = f64::from(k) * tau;
        let e = endpoint_state(&data, q, t);
        let (m, n) = (e.mu.norm(), e.nu.norm());
        let deviation = match kind {
            PhaseKind::Revival => (m - FRAC_1_SQRT_2)
                .abs()
                .max((n - FRAC_1_SQRT_2).abs())
                .max(e.leakage.abs()),
            PhaseKind::Transfer => (n - 1.0).abs(),
            PhaseKind::Return => (m - 1.0).abs(),
        };
        PhaseCheck {
            kind,
            k,
            t,
            mu_abs: m,
            nu_abs: n,
            leakage: e.leakage,
            rel_phase: e.rel_phase,
            deviation,
            passed: deviation < tol,
        }
    })
    .collect();
    let passed = phases.iter().all(|p| p.passed);
    CycleReport {
        tau,
        tol,
        phases,
        passed,
    }
}

impl CycleReport {
    /// Largest `||rel_phase| − π/2|` over the revival phases.
    pub fn max_rel_phase_error(&self) -> Option<f64> {
        self.phases
            .iter()
            .filter(|p| p.kind == PhaseKind::Revival)
            .map(|p| p.rel_phase.map(|r| (r.abs() - FRAC_PI_2).abs()))
            .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)))
    }
}
