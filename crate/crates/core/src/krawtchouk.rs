//! Normalized symmetric Krawtchouk polynomials and their binomial weights.
//!
//! `K̂_n(s)` is the value of the degree-`n` polynomial at the lattice point
//! `s`, for `0 <= n, s <= N`. Two evaluation paths are provided: the
//! three-term recurrence ([`krawtchouk_eval_recurrence`]), used everywhere in
//! production, and the terminating hypergeometric closed form
//! ([`krawtchouk_eval_hypergeometric`]), kept as a reference for small `N`.
//! The alternating hypergeometric sum cancels badly once `N` grows past ~20.

use crate::chain::coupling_a;
use crate::error::{Error, Result};

/// Rising factorial `a (a+1) ... (a+k-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).map(|i| a + f64::from(i)).product()
}

/// Binomial coefficient computed multiplicatively in floating point.
///
/// Exact for all `n <= 64` that fit the mantissa, and within a few ulps beyond.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Terminating Gauss series `₂F₁(−n, −b; −N; z)`.
///
/// The sum stops at `k = min(n, b)`, where the numerator Pochhammer symbols
/// vanish. `n <= N` keeps the denominator `(−N)_k` away from zero.
pub fn hyp2f1_terminating(n: usize, b_neg: usize, big_n: usize, z: f64) -> Result<f64> {
    if n > big_n {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            max: big_n,
        });
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n.min(b_neg) {
        let k = k as f64;
        term *= (k - n as f64) * (k - b_neg as f64) / ((k - big_n as f64) * (k + 1.0)) * z;
        sum += term;
    }
    Ok(sum)
}

/// `K̂_n(s) = (−1)^n √C(N, n) ₂F₁(−n, −s; −N; 2)`.
///
/// Reference path only; use [`krawtchouk_eval_recurrence`] for anything
/// beyond `N ≈ 20`.
pub fn krawtchouk_eval_hypergeometric(n: usize, s: usize, big_n: usize) -> Result<f64> {
    if s > big_n {
        return Err(Error::OutOfRange {
            what: "s",
            value: s,
            max: big_n,
        });
    }
    let f = hyp2f1_terminating(n, s, big_n, 2.0)?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * binomial(big_n, n).sqrt() * f)
}

/// Binomial weights `w_s = C(N, s) / 2^N`.
pub fn binomial_weights(big_n: usize) -> Vec<f64> {
    assert!(big_n >= 1, "chain needs at least two sites");
    let scale = 0.5f64.powi(big_n as i32);
    (0..=big_n).map(|s| binomial(big_n, s) * scale).collect()
}

/// Polynomial values `K̂_n(s)` on the full `(N+1) × (N+1)` grid, together
/// with the binomial weights that make the rows orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct KrawtchoukTable {
    big_n: usize,
    values: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl KrawtchoukTable {
    pub fn chain_n(&self) -> usize {
        self.big_n
    }

    /// `K̂_n(s)`.
    pub fn value(&self, n: usize, s: usize) -> f64 {
        self.values[n][s]
    }

    /// Row `n`: `K̂_n(s)` for `s = 0..=N`.
    pub fn row(&self, n: usize) -> &[f64] {
        &self.values[n]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest `|Σ_s w_s K̂_m(s) K̂_n(s) − δ_mn|` over all pairs.
    pub fn orthonormality_residual(&self) -> f64 {
        let size = self.big_n + 1;
        let mut worst = 0.0f64;
        for m in 0..size {
            for n in m..size {
                let dot: f64 = (0..size)
                    .map(|s| self.weights[s] * self.values[m][s] * self.values[n][s])
                    .sum();
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Fills the table with `(s − N/2) K̂_n = a_{n+1} K̂_{n+1} + a_n K̂_{n−1}`,
/// starting from `K̂_{−1} = 0`, `K̂_0 = 1`.
#[allow(clippy::needless_range_loop)]
pub fn krawtchouk_eval_recurrence(big_n: usize) -> KrawtchoukTable {
    assert!(big_n >= 1, "chain needs at least two sites");
    let size = big_n + 1;
    let half = big_n as f64 / 2.0;
    let mut values = vec![vec![0.0; size]; size];
    values[0].fill(1.0);
    for n in 0..big_n {
        let a_next = coupling_a(n + 1, big_n);
        let a_cur = coupling_a(n, big_n);
        for s in 0..size {
            let prev = if n == 0 { 0.0 } else { values[n - 1][s] };
            values[n + 1][s] = ((s as f64 - half) * values[n][s] - a_cur * prev) / a_next;
        }
    }
    KrawtchoukTable {
        big_n,
        values,
        weights: binomial_weights(big_n),
    }
}
