//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::process::ExitCode;

use common::{nn_fidelity, DenseOracle};
use pstchain::analysis::{
    cycle_verify, fidelity_scan, fr_predict, pst_predict, FrPrediction, PstPrediction,
    ThetaClass,
};
use pstchain::chain::{build_base_jacobi, build_hamiltonian, ChainSpec};
use pstchain::dynamics::{endpoint_state, evolve, verify_mirror_inversion, QuadraticQ};
use pstchain::krawtchouk::{binomial_weights, krawtchouk_eval_recurrence};
use pstchain::ratio::{rationalize, CouplingRatio, ExactRatio, Rationalized};
use pstchain::spectral::{
    analytic_eigenbasis, analytic_spectrum, chi_from_jacobi, group_projectors,
    jacobi_eigensolve, weights_from_spectrum, JACOBI_DEFAULT_TOL,
};

const FIDELITY_TOL: f64 = 1e-9;
const MIRROR_TOL: f64 = 1e-8;
const OBSTRUCTION_MAX: f64 = 0.999;
const SCAN_STEPS_20PI: usize = 40001;
const REL_PHASE_TOL: f64 = 1e-6;
const NN_LOCAL_TOL: f64 = 1e-6;
const NN_GRID: usize = 200_000;
const CLOSED_FORM_SAMPLES: usize = 1000;
const ORTHONORMALITY_TOL: f64 = 1e-10;
const WEIGHT_ROUTE_TOL: f64 = 1e-12;
const CHI_PARITY_TOL: f64 = 1e-10;
const EIGENVALUE_TOL: f64 = 1e-10;
const PROJECTOR_TOL: f64 = 1e-9;
const GOLDEN_TOL: f64 = 1e-9;
const GOLDEN_MAX_DEN: i64 = 10_000;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ratio(p: i64, q: i64) -> CouplingRatio {
    CouplingRatio::Finite(ExactRatio::new(p, q).unwrap())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Transfer at `t` measured by spectral synthesis and by the dense oracle.
fn transfer_at(spec: &ChainSpec, t: f64) -> Result<f64, String> {
    let data = analytic_eigenbasis(spec.n());
    let f = evolve(&data, QuadraticQ::from(spec), t, 0).amps[spec.n()].norm_sqr();
    let oracle = DenseOracle::new(spec).fidelity(t);
    ensure((f - 1.0).abs() < FIDELITY_TOL, || format!("fidelity {f} at t={t}"))?;
    ensure((oracle - 1.0).abs() < FIDELITY_TOL, || format!("dense oracle fidelity {oracle} at t={t}"))?;
    Ok(f)
}

fn predicted_pst_time(spec: &ChainSpec, r: CouplingRatio) -> Result<f64, String> {
    match pst_predict(r, spec.n()) {
        PstPrediction::Certified(c) => Ok(c.time.for_spec(spec)),
        other => Err(format!("expected a certificate, got {other:?}")),
    }
}

fn max_scanned_fidelity(spec: &ChainSpec, t_max: f64, steps: usize) -> f64 {
    fidelity_scan(spec, t_max, steps)
        .unwrap()
        .max_fidelity()
        .map(|(_, f)| f)
        .unwrap()
}

fn c1() -> Check {
    let spec = ChainSpec::new(5, 1.0, 1.0).unwrap();
    let t = predicted_pst_time(&spec, ratio(1, 1))?;
    ensure((t - PI).abs() < 1e-15, || format!("predicted T={t}"))?;
    let f = transfer_at(&spec, PI)?;
    let r = verify_mirror_inversion(&analytic_eigenbasis(5), QuadraticQ::from(&spec), PI, MIRROR_TOL);
    ensure(r.passed, || format!("mirror deviation {}", r.max_deviation))?;
    Ok(format!("fidelity {f:.15}, mirror deviation {:.2e}", r.max_deviation))
}

fn c2() -> Check {
    let spec = ChainSpec::new(4, 2.0, 1.0).unwrap();
    let t = predicted_pst_time(&spec, ratio(2, 1))?;
    ensure((t - PI).abs() < 1e-15, || format!("predicted T={t}"))?;
    let f = transfer_at(&spec, PI)?;
    Ok(format!("fidelity {f:.15} at T=pi"))
}

fn c3() -> Check {
    let spec = ChainSpec::new(4, 1.0, 1.0).unwrap();
    let pred = pst_predict(ratio(1, 1), 4);
    ensure(matches!(pred, PstPrediction::Refused(_)), || format!("expected refusal, got {pred:?}"))?;
    let max = max_scanned_fidelity(&spec, 20.0 * PI, SCAN_STEPS_20PI);
    ensure(max < OBSTRUCTION_MAX, || format!("max fidelity {max}"))?;
    Ok(format!("refused; max fidelity over (0, 20pi] = {max:.6}"))
}

fn c4() -> Check {
    let spec = ChainSpec::new(4, 1.0, 2.0).unwrap();
    let t = predicted_pst_time(&spec, ratio(1, 2))?;
    ensure((t - PI).abs() < 1e-15, || format!("predicted T={t}"))?;
    let f = transfer_at(&spec, PI)?;
    Ok(format!("fidelity {f:.15} at T=pi"))
}

fn c5() -> Check {
    let spec = ChainSpec::new(4, 1.0, 0.0).unwrap();
    let t = predicted_pst_time(&spec, CouplingRatio::PureQuadratic)?;
    ensure((t - PI).abs() < 1e-15, || format!("predicted T={t}"))?;
    let f = transfer_at(&spec, PI)?;
    let cert = match fr_predict(CouplingRatio::PureQuadratic, 4) {
        FrPrediction::Certified(c) => c,
        other => return Err(format!("expected FR certificate, got {other:?}")),
    };
    let tau = cert.tau.for_spec(&spec);
    ensure((tau - FRAC_PI_2).abs() < 1e-15, || format!("predicted tau={tau}"))?;
    ensure(cert.theta_class == ThetaClass::Balanced, || format!("class {:?}", cert.theta_class))?;
    let e = endpoint_state(&analytic_eigenbasis(4), QuadraticQ::from(&spec), tau);
    ensure(
        (e.mu.norm() - FRAC_1_SQRT_2).abs() < FIDELITY_TOL
            && (e.nu.norm() - FRAC_1_SQRT_2).abs() < FIDELITY_TOL
            && e.leakage.abs() < FIDELITY_TOL,
        || format!("|mu|={} |nu|={} leakage={}", e.mu.norm(), e.nu.norm(), e.leakage),
    )?;
    let odd = ChainSpec::new(5, 1.0, 0.0).unwrap();
    let max = max_scanned_fidelity(&odd, 20.0 * PI, SCAN_STEPS_20PI);
    ensure(max < OBSTRUCTION_MAX, || format!("N=5 max fidelity {max}"))?;
    Ok(format!("N=4 fidelity {f:.15}, balanced at pi/2; N=5 max fidelity {max:.3e}"))
}

fn c6() -> Check {
    let spec = ChainSpec::new(5, 1.0, 1.0).unwrap();
    let cert = match fr_predict(ratio(1, 1), 5) {
        FrPrediction::Certified(c) => c,
        other => return Err(format!("expected FR certificate, got {other:?}")),
    };
    let tau = cert.tau.for_spec(&spec);
    ensure((tau - FRAC_PI_2).abs() < 1e-15, || format!("predicted tau={tau}"))?;
    let report = cycle_verify(&spec, &cert, FIDELITY_TOL);
    ensure(report.passed, || format!("cycle failed: {:?}", report.phases))?;
    let phase_err = report
        .max_rel_phase_error()
        .ok_or_else(|| "relative phase undefined at a revival".to_string())?;
    ensure(phase_err < REL_PHASE_TOL, || format!("relative phase off by {phase_err}"))?;
    let worst = report.phases.iter().map(|p| p.deviation).fold(0.0, f64::max);
    Ok(format!("4 phases pass, max deviation {worst:.2e}, rel phase error {phase_err:.2e}"))
}

fn c7() -> Check {
    let mut localized = 0usize;
    for n in 4..=8 {
        let spec = ChainSpec::new(n, 0.0, 1.0).unwrap();
        let data = analytic_eigenbasis(n);
        let q = QuadraticQ::from(&spec);
        for i in 1..=NN_GRID {
            let t = 2.0 * PI * i as f64 / NN_GRID as f64;
            let e = endpoint_state(&data, q, t);
            if e.leakage < NN_LOCAL_TOL {
                localized += 1;
                let (m, v) = (e.mu.norm(), e.nu.norm());
                ensure(v > 1.0 - NN_LOCAL_TOL || m > 1.0 - NN_LOCAL_TOL, || {
                    format!("N={n} t={t}: balanced-like point |mu|={m} |nu|={v}")
                })?;
            }
        }
    }
    Ok(format!("{localized} localized grid points, all transfer or return"))
}

fn c8() -> Check {
    let mut worst = 0.0f64;
    for n in 1..=10 {
        for beta in [1.0, 0.7, 2.5] {
            let spec = ChainSpec::new(n, 0.0, beta).unwrap();
            let t_max = 4.0 * PI / beta;
            let s = fidelity_scan(&spec, t_max, CLOSED_FORM_SAMPLES).unwrap();
            for (&t, &f) in s.times.iter().zip(&s.fidelity) {
                worst = worst.max((f - nn_fidelity(n, beta, t)).abs());
            }
        }
    }
    ensure(worst < FIDELITY_TOL, || format!("max deviation {worst}"))?;
    Ok(format!("max deviation from sin^(2N)(beta t/2) {worst:.2e}"))
}

fn c9() -> Check {
    let mut ortho = 0.0f64;
    for n in 1..=20 {
        ortho = ortho.max(krawtchouk_eval_recurrence(n).orthonormality_residual());
    }
    ensure(ortho < ORTHONORMALITY_TOL, || format!("orthonormality residual {ortho}"))?;

    let (mut route, mut parity) = (0.0f64, 0.0f64);
    for n in 1..=16 {
        let table = chi_from_jacobi(&build_base_jacobi(n), &analytic_spectrum(n)).map_err(|e| e.to_string())?;
        let general = weights_from_spectrum(&table, false).map_err(|e| e.to_string())?;
        let mirror = weights_from_spectrum(&table, true).map_err(|e| e.to_string())?;
        let binom = binomial_weights(n);
        for s in 0..=n {
            route = route
                .max((general[s] - mirror[s]).abs())
                .max((general[s] - binom[s]).abs());
            let eps = if (n + s) % 2 == 0 { 1.0 } else { -1.0 };
            parity = parity.max((table.chi[n][s] - eps).abs());
        }
    }
    ensure(route < WEIGHT_ROUTE_TOL, || format!("weight routes differ by {route}"))?;
    ensure(parity < CHI_PARITY_TOL, || format!("chi_N parity off by {parity}"))?;
    Ok(format!("orthonormality {ortho:.1e}, weight routes {route:.1e}, chi_N parity {parity:.1e}"))
}

fn c10() -> Check {
    let couplings = [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0), (0.0, 1.0), (1.0, 0.0), (0.3, 1.7), (0.5, 0.0)];
    let (mut ev, mut proj) = (0.0f64, 0.0f64);
    for n in 1..=12 {
        let basis = analytic_eigenbasis(n);
        for &(alpha, beta) in &couplings {
            let spec = ChainSpec::new(n, alpha, beta).unwrap();
            let q = QuadraticQ::from(&spec);
            let energies: Vec<f64> = basis.eigenvalues.iter().map(|&x| q.eval(x)).collect();
            let mut sorted = energies.clone();
            sorted.sort_by(f64::total_cmp);
            let dense = build_hamiltonian(&spec).to_dense();
            let numeric = jacobi_eigensolve(&dense, JACOBI_DEFAULT_TOL).map_err(|e| e.to_string())?;
            for (a, b) in sorted.iter().zip(&numeric.eigenvalues) {
                ev = ev.max((a - b).abs());
            }
            let pa = group_projectors(&energies, &basis.eigenvectors, 1e-8);
            let pb = group_projectors(&numeric.eigenvalues, &numeric.eigenvectors, 1e-8);
            ensure(pa.len() == pb.len(), || {
                format!("N={n} alpha={alpha} beta={beta}: {} vs {} clusters", pa.len(), pb.len())
            })?;
            for (a, b) in pa.iter().zip(&pb) {
                ensure(a.multiplicity == b.multiplicity, || {
                    format!("N={n} alpha={alpha} beta={beta}: multiplicity mismatch at {}", a.value)
                })?;
                proj = proj.max((&a.projector - &b.projector).amax());
            }
        }
    }
    ensure(ev < EIGENVALUE_TOL, || format!("eigenvalues differ by {ev}"))?;
    ensure(proj < PROJECTOR_TOL, || format!("projectors differ by {proj}"))?;
    Ok(format!("eigenvalues {ev:.1e}, projectors {proj:.1e}"))
}

fn c11() -> Check {
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let r = rationalize(golden, 1.0, GOLDEN_TOL, GOLDEN_MAX_DEN);
    ensure(r == Rationalized::NoCertificate, || format!("rationalize gave {r:?}"))?;
    let spec = ChainSpec::new(5, golden, 1.0).unwrap();
    let data = analytic_eigenbasis(5);
    let mut closest = f64::INFINITY;
    for k in 1..=20 {
        let rep = verify_mirror_inversion(&data, QuadraticQ::from(&spec), k as f64 * PI, MIRROR_TOL);
        ensure(!rep.passed, || format!("mirror inversion passed at {k}pi"))?;
        closest = closest.min(rep.max_deviation);
    }
    Ok(format!("no certificate; smallest mirror deviation over k=1..20 is {closest:.3}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("NNN PST, odd N", c1),
        ("NNN PST, even N", c2),
        ("parity obstruction", c3),
        ("rational non-integer ratio", c4),
        ("pure quadratic branch", c5),
        ("FR cycle", c6),
        ("NN has no FR", c7),
        ("NN closed form", c8),
        ("polynomial machinery", c9),
        ("oracle equivalence", c10),
        ("irrational ratio", c11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
