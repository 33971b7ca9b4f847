//! Spectral data for Jacobi matrices.
//!
//! Three routes to the same object: the closed-form Krawtchouk eigenbasis,
//! the orthogonal-polynomial recurrence driven by a tridiagonal matrix and
//! its eigenvalues, and a cyclic Jacobi eigensolver used as an independent
//! numerical oracle.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::chain::{check_square_symmetric, BandMatrix};
use crate::error::{Error, Result};
use crate::krawtchouk::krawtchouk_eval_recurrence;

pub const JACOBI_MAX_SWEEPS: usize = 30;
pub const JACOBI_DEFAULT_TOL: f64 = 1e-13;

/// Eigen-decomposition in the row convention of the chain literature:
/// `eigenvectors[(s, n)] = W_sn`, the coefficient of site `n` in `|x_s⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
    /// `w_s = W_s0²`.
    pub weights: Vec<f64>,
    /// Reflection eigenvalues `ε_s`. `None` when some eigenvector is not an
    /// eigenvector of the reflection (possible inside a degenerate eigenspace
    /// returned by the numerical solver).
    pub parities: Option<Vec<i8>>,
}

impl SpectralData {
    fn from_rows(eigenvalues: Vec<f64>, eigenvectors: DMatrix<f64>) -> Self {
        let size = eigenvalues.len();
        let weights = (0..size).map(|s| eigenvectors[(s, 0)].powi(2)).collect();
        let parities = (0..size)
            .map(|s| {
                let overlap: f64 = (0..size)
                    .map(|n| eigenvectors[(s, n)] * eigenvectors[(s, size - 1 - n)])
                    .sum();
                if overlap > 1.0 - 1e-6 {
                    Some(1)
                } else if overlap < -1.0 + 1e-6 {
                    Some(-1)
                } else {
                    None
                }
            })
            .collect();
        SpectralData {
            eigenvalues,
            eigenvectors,
            weights,
            parities,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn chain_n(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    /// Largest entry of `|W Wᵀ − I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let size = self.n_sites();
        let gram = &self.eigenvectors * self.eigenvectors.transpose();
        (gram - DMatrix::identity(size, size)).abs().max()
    }
}

/// `x_s = s − N/2`.
pub fn analytic_spectrum(big_n: usize) -> Vec<f64> {
    assert!(big_n >= 1, "chain needs at least two sites");
    let half = big_n as f64 / 2.0;
    (0..=big_n).map(|s| s as f64 - half).collect()
}

/// Eigenbasis of the Krawtchouk matrix `J̄`: `W_sn = √w_s K̂_n(s)`.
pub fn analytic_eigenbasis(big_n: usize) -> SpectralData {
    let table = krawtchouk_eval_recurrence(big_n);
    let size = big_n + 1;
    let w = table.weights();
    let eigenvectors = DMatrix::from_fn(size, size, |s, n| w[s].sqrt() * table.value(n, s));
    SpectralData {
        eigenvalues: analytic_spectrum(big_n),
        eigenvectors,
        weights: w.to_vec(),
        parities: Some(
            (0..size)
                .map(|s| if (big_n + s).is_multiple_of(2) { 1 } else { -1 })
                .collect(),
        ),
    }
}

/// Cyclic Jacobi rotations on a private copy of `a`, sweeping until the
/// off-diagonal Frobenius norm drops below `tol`.
///
/// Eigenvalues come back ascending; each eigenvector is flipped so that its
/// first non-negligible component is positive.
pub fn jacobi_eigensolve(a: &DMatrix<f64>, tol: f64) -> Result<SpectralData> {
    let size = check_square_symmetric(a)?;
    let mut m = a.clone();
    let mut v = DMatrix::<f64>::identity(size, size);

    let off_norm = |m: &DMatrix<f64>| -> f64 {
        let mut sum = 0.0;
        for i in 0..size {
            for j in 0..size {
                if i != j {
                    sum += m[(i, j)] * m[(i, j)];
                }
            }
        }
        sum.sqrt()
    };

    let mut converged = false;
    for _ in 0..=JACOBI_MAX_SWEEPS {
        if off_norm(&m) < tol {
            converged = true;
            break;
        }
        for p in 0..size {
            for q in (p + 1)..size {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..size {
                    let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..size {
                    let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..size {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off_norm: off_norm(&m),
        });
    }

    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let eigenvalues = order.iter().map(|&i| m[(i, i)]).collect();
    let mut rows = DMatrix::from_fn(size, size, |s, n| v[(n, order[s])]);
    for s in 0..size {
        let lead = (0..size)
            .map(|n| rows[(s, n)])
            .find(|x| x.abs() > 1e-12)
            .unwrap_or(1.0);
        if lead < 0.0 {
            rows.row_mut(s).neg_mut();
        }
    }
    Ok(SpectralData::from_rows(eigenvalues, rows))
}

/// Orthogonal polynomials of a Jacobi matrix evaluated on its spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthoPolyTable {
    pub eigenvalues: Vec<f64>,
    /// `chi[n][s] = χ_n(x_s)`.
    pub chi: Vec<Vec<f64>>,
    /// `√h_N = J_1 J_2 ⋯ J_N`.
    pub sqrt_h_n: f64,
    /// `|P′_{N+1}(x_s)| = Π_{t≠s} |x_s − x_t|`.
    pub char_deriv: Vec<f64>,
}

impl OrthoPolyTable {
    pub fn chain_n(&self) -> usize {
        self.eigenvalues.len() - 1
    }

    /// `χ_N` changes sign between every pair of consecutive eigenvalues, i.e.
    /// its `N` zeros interlace the spectrum.
    pub fn interlaces(&self) -> bool {
        let last = &self.chi[self.chain_n()];
        last.windows(2).all(|w| w[0] * w[1] < 0.0)
    }
}

/// Runs `J_{n+1} χ_{n+1} = (x − B_n) χ_n − J_n χ_{n−1}` from `χ_{−1} = 0`,
/// `χ_0 = 1` at every eigenvalue. `eigenvalues` must be strictly increasing.
pub fn chi_from_jacobi(j: &BandMatrix, eigenvalues: &[f64]) -> Result<OrthoPolyTable> {
    if j.bandwidth() != 1 {
        return Err(Error::InvalidBand(format!(
            "expected a tridiagonal matrix, got bandwidth {}",
            j.bandwidth()
        )));
    }
    let size = j.n_sites();
    if eigenvalues.len() != size {
        return Err(Error::InvalidBand(format!(
            "{} eigenvalues for {size} sites",
            eigenvalues.len()
        )));
    }
    if eigenvalues.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidBand(
            "eigenvalues must be strictly increasing".into(),
        ));
    }
    let off = j.band(1).unwrap_or_default();
    if let Some(pos) = off.iter().position(|&c| c <= 0.0) {
        return Err(Error::Disconnected(pos + 1));
    }
    let diag = j.diag();
    let big_n = size - 1;

    let mut chi = vec![vec![0.0; size]; size];
    chi[0].fill(1.0);
    for n in 0..big_n {
        let j_cur = if n == 0 { 0.0 } else { off[n - 1] };
        for (s, &x) in eigenvalues.iter().enumerate() {
            let prev = if n == 0 { 0.0 } else { chi[n - 1][s] };
            chi[n + 1][s] = ((x - diag[n]) * chi[n][s] - j_cur * prev) / off[n];
        }
    }
    let sqrt_h_n = off.iter().product();
    let char_deriv = eigenvalues
        .iter()
        .enumerate()
        .map(|(s, &xs)| {
            eigenvalues
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != s)
                .map(|(_, &xt)| (xs - xt).abs())
                .product()
        })
        .collect();
    Ok(OrthoPolyTable {
        eigenvalues: eigenvalues.to_vec(),
        chi,
        sqrt_h_n,
        char_deriv,
    })
}

/// Discrete orthogonality weights from the spectrum.
///
/// General form `w_s = √h_N / (χ_N(x_s) P′_{N+1}(x_s))` with
/// `sign P′_{N+1}(x_s) = (−1)^{N+s}`; with `mirror` set the mirror-symmetric
/// shortcut `w_s = √h_N / |P′_{N+1}(x_s)|` is used instead.
pub fn weights_from_spectrum(table: &OrthoPolyTable, mirror: bool) -> Result<Vec<f64>> {
    let big_n = table.chain_n();
    table
        .char_deriv
        .iter()
        .enumerate()
        .map(|(s, &abs_deriv)| {
            let w = if mirror {
                table.sqrt_h_n / abs_deriv
            } else {
                let sign = if (big_n + s).is_multiple_of(2) { 1.0 } else { -1.0 };
                table.sqrt_h_n / (table.chi[big_n][s] * sign * abs_deriv)
            };
            if w > 0.0 && w.is_finite() {
                Ok(w)
            } else {
                Err(Error::NonPositiveWeight { index: s, value: w })
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParityReport {
    pub passed: bool,
    pub max_violation: f64,
}

/// Checks `W_{s,N−n} = (−1)^{N+s} W_{s,n}` for every `s`, `n`.
pub fn reflection_parity_check(data: &SpectralData, tol: f64) -> ParityReport {
    let size = data.n_sites();
    let big_n = size - 1;
    let mut worst = 0.0f64;
    for s in 0..size {
        let sign = if (big_n + s).is_multiple_of(2) { 1.0 } else { -1.0 };
        for n in 0..size {
            let d = data.eigenvectors[(s, big_n - n)] - sign * data.eigenvectors[(s, n)];
            worst = worst.max(d.abs());
        }
    }
    ParityReport {
        passed: worst <= tol,
        max_violation: worst,
    }
}

/// One eigenspace: a representative eigenvalue and its orthogonal projector.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub value: f64,
    pub multiplicity: usize,
    pub projector: DMatrix<f64>,
}

/// Groups eigenpairs whose values lie within `cluster_tol` of their
/// neighbour and sums `v vᵀ` over each group. `energies[s]` pairs with
/// row `s` of `vectors`. Clusters come back sorted by value.
pub fn group_projectors(
    energies: &[f64],
    vectors: &DMatrix<f64>,
    cluster_tol: f64,
) -> Vec<EigenCluster> {
    let size = vectors.ncols();
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));

    let mut clusters: Vec<(Vec<usize>, f64)> = Vec::new();
    for &s in &order {
        match clusters.last_mut() {
            Some((members, last)) if (energies[s] - *last).abs() <= cluster_tol => {
                members.push(s);
                *last = energies[s];
            }
            _ => clusters.push((vec![s], energies[s])),
        }
    }
    clusters
        .into_iter()
        .map(|(members, _)| {
            let mut projector = DMatrix::zeros(size, size);
            for &s in &members {
                let row = vectors.row(s);
                projector += row.transpose() * row;
            }
            let value = members.iter().map(|&s| energies[s]).sum::<f64>() / members.len() as f64;
            EigenCluster {
                value,
                multiplicity: members.len(),
                projector,
            }
        })
        .collect()
}
