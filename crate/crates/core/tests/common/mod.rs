//! Oracles shared by the integration tests. They go through a dense
//! Hamiltonian and nalgebra's own symmetric eigensolver, never through the
//! library's spectral synthesis.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use pstchain::chain::{build_hamiltonian, ChainSpec};

pub type C64 = Complex<f64>;

pub struct DenseOracle {
    eig: SymmetricEigen<f64, nalgebra::Dyn>,
}

impl DenseOracle {
    pub fn new(spec: &ChainSpec) -> Self {
        let h: DMatrix<f64> = build_hamiltonian(spec).to_dense();
        DenseOracle {
            eig: SymmetricEigen::new(h),
        }
    }

    /// `⟨k|e^{−itH}|l⟩`.
    pub fn amplitude(&self, t: f64, k: usize, l: usize) -> C64 {
        let v = &self.eig.eigenvectors;
        self.eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &e)| C64::from_polar(1.0, -t * e) * (v[(k, j)] * v[(l, j)]))
            .sum()
    }

    pub fn fidelity(&self, t: f64) -> f64 {
        let last = self.eig.eigenvalues.len() - 1;
        self.amplitude(t, last, 0).norm_sqr()
    }
}

/// `sin^{2N}(βt/2)`: transfer fidelity of the nearest-neighbour chain.
pub fn nn_fidelity(n: usize, beta: f64, t: f64) -> f64 {
    (beta * t / 2.0).sin().powi(2 * n as i32)
}
