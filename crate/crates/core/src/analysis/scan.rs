use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::ChainSpec;
use crate::dynamics::{evolve, QuadraticQ};
use crate::error::{Error, Result};
use crate::spectral::analytic_eigenbasis;

pub const CSV_HEADER: &str = "t,fidelity,endpoint_prob";

/// Transfer fidelity `|⟨N|U(t)|0⟩|²` and end-site probability `|μ|² + |ν|²`
/// on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelitySeries {
    pub times: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub endpoint_prob: Vec<f64>,
}

impl FidelitySeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest fidelity and the time it occurs at.
    pub fn max_fidelity(&self) -> Option<(f64, f64)> {
        self.times
            .iter()
            .zip(&self.fidelity)
            .map(|(&t, &f)| (t, f))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// 17 significant digits per value, so every double survives a round trip.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e}\n",
                self.times[i], self.fidelity[i], self.endpoint_prob[i]
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected header {CSV_HEADER:?}, got {other:?}"
                )))
            }
        }
        let mut series = FidelitySeries {
            times: Vec::new(),
            fidelity: Vec::new(),
            endpoint_prob: Vec::new(),
        };
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse(format!(
                    "row {}: expected 3 fields, got {}",
                    i + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                let v = s
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {s:?}: {e}", i + 1)))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Parse(format!("row {}: non-finite value {s:?}", i + 1)))
                }
            };
            series.times.push(parse(fields[0])?);
            series.fidelity.push(parse(fields[1])?);
            series.endpoint_prob.push(parse(fields[2])?);
        }
        Ok(series)
    }
}

/// Evaluates the chain on `steps` uniformly spaced times covering
/// `[0, t_max]`. Grid points are computed in parallel; output order is the
/// grid order.
pub fn fidelity_scan(spec: &ChainSpec, t_max: f64, steps: usize) -> Result<FidelitySeries> {
    if steps < 2 {
        return Err(Error::InvalidSpec(format!("scan needs at least 2 steps, got {steps}")));
    }
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(Error::InvalidSpec(format!("t_max must be finite and non-negative, got {t_max}")));
    }
    let data = analytic_eigenbasis(spec.n());
    let q = QuadraticQ::from(spec);
    let last = spec.n();
    let dt = t_max / (steps - 1) as f64;
    let rows: Vec<(f64, f64, f64)> = (0..steps)
        .into_par_iter()
        .map(|i| {
            let t = if i == steps - 1 { t_max } else { i as f64 * dt };
            let a = evolve(&data, q, t, 0);
            let f = a.amps[last].norm_sqr();
            (t, f, a.amps[0].norm_sqr() + f)
        })
        .collect();
    let mut series = FidelitySeries {
        times: Vec::with_capacity(steps),
        fidelity: Vec::with_capacity(steps),
        endpoint_prob: Vec::with_capacity(steps),
    };
    for (t, f, e) in rows {
        series.times.push(t);
        series.fidelity.push(f);
        series.endpoint_prob.push(e);
    }
    Ok(series)
}
