//! Perfect state transfer and fractional revival in XX spin chains with
//! engineered nearest- and next-to-nearest-neighbour couplings.
//!
//! The one-excitation Hamiltonian is a polynomial `Q(J̄) = α J̄² + β J̄` in
//! the Krawtchouk Jacobi matrix `J̄`, so every quantity of interest follows
//! from the eigenbasis of `J̄`:
//!
//! - [`krawtchouk`]: the polynomials and weights making up that eigenbasis;
//! - [`chain`]: coupling profiles, banded Hamiltonians, mirror symmetry;
//! - [`spectral`]: analytic and numerical spectral data;
//! - [`dynamics`]: propagators by spectral synthesis, end-site amplitudes;
//! - [`analysis`]: exact transfer/revival certificates and scans.

pub mod analysis;
pub mod chain;
pub mod config;
pub mod dynamics;
mod error;
pub mod expr;
pub mod krawtchouk;
pub mod ratio;
pub mod spectral;

pub use error::{Error, Result};
