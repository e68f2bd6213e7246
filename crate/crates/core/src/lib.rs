//! Twisted L-functions of function-field Galois representations and the
//! statistics of von Mangoldt sums in arithmetic progressions over `F_q[t]`.
//!
//! The crate is `no_std` (with `alloc`). The default `std` feature only turns
//! on rayon-backed parallel loops; results are identical either way.
//!
//! Layout:
//! - [`algebra`]: `GF(p^e)`, polynomials over it, extension and residue fields.
//! - [`curve`]: the hyperelliptic family `y^2 = f(x)(x - t)`, Frobenius traces,
//!   Euler factors and the von Mangoldt function of its Jacobian.
//! - [`dirichlet`]: unit groups `(F_q[t]/Q)^x` and their characters.
//! - [`lfun`]: twisted partial L-polynomials, their zeros and unitarized classes.
//! - [`apstats`]: sums in arithmetic progressions, mean and variance.
//! - [`rmt`]: Haar unitary sampling and trace moments.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod algebra;
pub mod apstats;
pub mod curve;
pub mod dft;
pub mod dirichlet;
mod error;
pub mod lfun;
pub mod numeric;
mod par;
pub mod rmt;

pub use error::{Error, Result};
