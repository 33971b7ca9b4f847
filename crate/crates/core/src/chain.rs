//! Coupling profiles and one-excitation Hamiltonians.
//!
//! Site indices run over `0..=N`. The fiducial Jacobi matrix `J̄` has zero
//! diagonal and off-diagonal entries `a_n = ½√(n(N−n+1))`; the chains built
//! here are `β J̄` (nearest neighbour) and `α J̄² + β J̄` (next-to-nearest).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{CouplingRatio, ExactRatio};

/// Largest supported `N`, so that the chain has at most 64 sites.
pub const MAX_CHAIN_N: usize = 63;

/// `a_n = ½√(n(N−n+1))`; zero at both `n = 0` and `n = N+1`.
pub fn coupling_a(n: usize, big_n: usize) -> f64 {
    if n == 0 || n > big_n {
        return 0.0;
    }
    0.5 * ((n * (big_n - n + 1)) as f64).sqrt()
}

/// Chain length plus the coefficients of `Q_2(J̄) = α J̄² + β J̄`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    n: usize,
    alpha: f64,
    beta: f64,
    ratio: Option<CouplingRatio>,
}

impl ChainSpec {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 || n > MAX_CHAIN_N {
            return Err(Error::InvalidSpec(format!(
                "N must lie in 1..={MAX_CHAIN_N}, got {n}"
            )));
        }
        if !(alpha.is_finite() && beta.is_finite()) || alpha < 0.0 || beta < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "alpha and beta must be finite and non-negative, got alpha={alpha}, beta={beta}"
            )));
        }
        if alpha == 0.0 && beta == 0.0 {
            return Err(Error::InvalidSpec("alpha and beta are both zero".into()));
        }
        Ok(ChainSpec {
            n,
            alpha,
            beta,
            ratio: None,
        })
    }

    /// Builds a spec from exact `α` and `β`; the ratio is attached exactly.
    pub fn from_exact(n: usize, alpha: ExactRatio, beta: ExactRatio) -> Result<Self> {
        let spec = ChainSpec::new(n, alpha.to_f64(), beta.to_f64())?;
        let ratio = if beta.is_zero() {
            CouplingRatio::PureQuadratic
        } else {
            CouplingRatio::Finite(alpha.checked_div(&beta).ok_or_else(|| {
                Error::InvalidSpec(format!("ratio {alpha} / {beta} overflows"))
            })?)
        };
        spec.with_ratio(ratio)
    }

    /// Attaches an exact `α/β`, checking it against the float parameters.
    pub fn with_ratio(mut self, ratio: CouplingRatio) -> Result<Self> {
        match ratio {
            CouplingRatio::PureQuadratic if self.beta != 0.0 => {
                return Err(Error::InvalidSpec(
                    "pure-quadratic ratio requires beta = 0".into(),
                ))
            }
            CouplingRatio::Finite(_) if self.beta == 0.0 => {
                return Err(Error::InvalidSpec(
                    "finite ratio requires beta > 0".into(),
                ))
            }
            CouplingRatio::Finite(r) => {
                let diff = (self.alpha / self.beta - r.to_f64()).abs();
                if diff >= 1e-12 * r.to_f64().max(1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "alpha/beta = {} differs from {r} by {diff:e}",
                        self.alpha / self.beta
                    )));
                }
            }
            CouplingRatio::PureQuadratic => {}
        }
        self.ratio = Some(ratio);
        Ok(self)
    }

    /// `N`; the chain has `N + 1` sites.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn ratio(&self) -> Option<CouplingRatio> {
        self.ratio
    }

    pub fn n_sites(&self) -> usize {
        self.n + 1
    }
}

/// Symmetric banded matrix on `N + 1` sites, upper bands only.
///
/// `band(k)[j]` is the `(j, j+k)` element, i.e. the coupling `J^(k)_{j+k}`
/// between sites `j` and `j+k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    diag: Vec<f64>,
    bands: Vec<Vec<f64>>,
}

impl BandMatrix {
    /// Checks band lengths and that every coupling is finite and non-negative.
    pub fn new(diag: Vec<f64>, bands: Vec<Vec<f64>>) -> Result<Self> {
        let size = diag.len();
        if size < 2 {
            return Err(Error::InvalidBand(format!(
                "need at least two sites, got {size}"
            )));
        }
        if bands.is_empty() {
            return Err(Error::InvalidBand("bandwidth must be at least 1".into()));
        }
        if diag.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidBand("non-finite diagonal entry".into()));
        }
        for (i, band) in bands.iter().enumerate() {
            let k = i + 1;
            let expect = size.saturating_sub(k);
            if band.len() != expect {
                return Err(Error::InvalidBand(format!(
                    "band {k} has {} entries, expected {expect}",
                    band.len()
                )));
            }
            if let Some(bad) = band.iter().find(|&&c| !(c.is_finite() && c >= 0.0)) {
                return Err(Error::InvalidBand(format!(
                    "band {k} has invalid coupling {bad}"
                )));
            }
        }
        Ok(BandMatrix { diag, bands })
    }

    /// Reads the upper bands of a dense symmetric matrix. Entries outside the
    /// requested bandwidth must vanish within `1e-12`.
    pub fn from_dense(dense: &DMatrix<f64>, bandwidth: usize) -> Result<Self> {
        let size = check_square_symmetric(dense)?;
        for i in 0..size {
            for j in (i + bandwidth + 1)..size {
                if dense[(i, j)].abs() > 1e-12 {
                    return Err(Error::InvalidBand(format!(
                        "entry ({i}, {j}) = {} lies outside bandwidth {bandwidth}",
                        dense[(i, j)]
                    )));
                }
            }
        }
        let diag = (0..size).map(|i| dense[(i, i)]).collect();
        let bands = (1..=bandwidth)
            .map(|k| (0..size.saturating_sub(k)).map(|j| dense[(j, j + k)]).collect())
            .collect();
        BandMatrix::new(diag, bands)
    }

    pub fn n_sites(&self) -> usize {
        self.diag.len()
    }

    /// `N = n_sites − 1`.
    pub fn chain_n(&self) -> usize {
        self.diag.len() - 1
    }

    pub fn bandwidth(&self) -> usize {
        self.bands.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Upper band `k` (1-based), or `None` past the bandwidth.
    pub fn band(&self, k: usize) -> Option<&[f64]> {
        k.checked_sub(1)
            .and_then(|i| self.bands.get(i))
            .map(Vec::as_slice)
    }

    /// `J^(k)_n` in the 1-based labelling, zero outside `k..=N`.
    pub fn coupling(&self, k: usize, n: usize) -> f64 {
        match self.band(k) {
            Some(band) if n >= k => band.get(n - k).copied().unwrap_or(0.0),
            _ => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let size = self.n_sites();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diag));
        for (i, band) in self.bands.iter().enumerate() {
            let k = i + 1;
            for (j, &c) in band.iter().enumerate() {
                m[(j, j + k)] = c;
                m[(j + k, j)] = c;
            }
        }
        debug_assert_eq!(m.nrows(), size);
        m
    }

    pub fn scaled(&self, factor: f64) -> BandMatrix {
        BandMatrix {
            diag: self.diag.iter().map(|d| d * factor).collect(),
            bands: self
                .bands
                .iter()
                .map(|b| b.iter().map(|c| c * factor).collect())
                .collect(),
        }
    }
}

pub(crate) fn check_square_symmetric(m: &DMatrix<f64>) -> Result<usize> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let mut worst = 0.0f64;
    for i in 0..rows {
        for j in (i + 1)..rows {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if worst > 1e-12 || worst.is_nan() {
        return Err(Error::NotSymmetric(worst));
    }
    Ok(rows)
}

#[derive(Serialize, Deserialize)]
struct BandMatrixJson {
    n_sites: usize,
    bandwidth: usize,
    diag: Vec<f64>,
    band1: Vec<f64>,
    band2: Vec<f64>,
    #[serde(flatten)]
    higher: BTreeMap<String, Vec<f64>>,
}

impl Serialize for BandMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let band = |k: usize| self.band(k).map(<[f64]>::to_vec).unwrap_or_default();
        let higher = (3..=self.bandwidth())
            .map(|k| (format!("band{k}"), band(k)))
            .collect();
        BandMatrixJson {
            n_sites: self.n_sites(),
            bandwidth: self.bandwidth(),
            diag: self.diag.clone(),
            band1: band(1),
            band2: band(2),
            higher,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BandMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let mut raw = BandMatrixJson::deserialize(deserializer)?;
        if raw.n_sites != raw.diag.len() {
            return Err(D::Error::custom(format!(
                "n_sites = {} but diag has {} entries",
                raw.n_sites,
                raw.diag.len()
            )));
        }
        if raw.bandwidth == 0 || raw.bandwidth > raw.n_sites {
            return Err(D::Error::custom(format!("bad bandwidth {}", raw.bandwidth)));
        }
        let mut bands = vec![raw.band1];
        if raw.bandwidth >= 2 {
            bands.push(raw.band2);
        } else if !raw.band2.is_empty() {
            return Err(D::Error::custom("band2 present for bandwidth 1"));
        }
        for k in 3..=raw.bandwidth {
            let band = raw
                .higher
                .remove(&format!("band{k}"))
                .ok_or_else(|| D::Error::custom(format!("missing band{k}")))?;
            bands.push(band);
        }
        if let Some(extra) = raw.higher.keys().next() {
            return Err(D::Error::custom(format!("unexpected field {extra}")));
        }
        BandMatrix::new(raw.diag, bands).map_err(D::Error::custom)
    }
}

/// The fiducial Krawtchouk Jacobi matrix: `J̄_n = a_n`, `B̄_n = 0`.
pub fn build_base_jacobi(big_n: usize) -> BandMatrix {
    assert!(big_n >= 1, "chain needs at least two sites");
    let band1 = (1..=big_n).map(|n| coupling_a(n, big_n)).collect();
    BandMatrix {
        diag: vec![0.0; big_n + 1],
        bands: vec![band1],
    }
}

/// One-excitation matrix of `α J̄² + β J̄`.
///
/// With `α = 0` this is the tridiagonal `β J̄`. Otherwise the couplings are
/// `J^(1)_n = β a_n`, `J^(2)_n = α a_{n−1} a_n` and the fields are
/// `B_n = α (a_n² + a_{n+1}²)`.
pub fn build_hamiltonian(spec: &ChainSpec) -> BandMatrix {
    let big_n = spec.n();
    let (alpha, beta) = (spec.alpha(), spec.beta());
    let a = |n: usize| coupling_a(n, big_n);
    if alpha == 0.0 {
        return build_base_jacobi(big_n).scaled(beta);
    }
    let diag = (0..=big_n)
        .map(|n| alpha * (a(n) * a(n) + a(n + 1) * a(n + 1)))
        .collect();
    let band1 = (1..=big_n).map(|n| beta * a(n)).collect();
    let band2 = (2..=big_n).map(|n| alpha * a(n - 1) * a(n)).collect();
    BandMatrix {
        diag,
        bands: vec![band1, band2],
    }
}

/// `Σ_k coeffs[k] · J^k` on dense matrices, for polynomials of any degree.
pub fn matrix_polynomial(base: &DMatrix<f64>, coeffs: &[f64]) -> DMatrix<f64> {
    let size = base.nrows();
    let mut acc = DMatrix::zeros(size, size);
    // Horner
    for &c in coeffs.iter().rev() {
        acc = &acc * base + DMatrix::identity(size, size) * c;
    }
    acc
}

/// Anti-diagonal permutation `R|n⟩ = |N−n⟩`.
pub fn reflection_matrix(big_n: usize) -> DMatrix<f64> {
    let size = big_n + 1;
    DMatrix::from_fn(size, size, |i, j| if i + j == big_n { 1.0 } else { 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MirrorReport {
    pub symmetric: bool,
    pub max_violation: f64,
}

/// Checks `J^(k)_n = J^(k)_{N−n+k}` on every band and `B_n = B_{N−n}`.
pub fn mirror_symmetry_check(h: &BandMatrix, tol: f64) -> MirrorReport {
    let last = h.n_sites() - 1;
    let mut worst = (0..=last)
        .map(|n| (h.diag[n] - h.diag[last - n]).abs())
        .fold(0.0, f64::max);
    for (i, band) in h.bands.iter().enumerate() {
        let k = i + 1;
        for j in 0..band.len() {
            worst = worst.max((band[j] - band[last - k - j]).abs());
        }
    }
    MirrorReport {
        symmetric: worst <= tol,
        max_violation: worst,
    }
}
