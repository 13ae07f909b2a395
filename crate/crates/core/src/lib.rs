//! Exact, desk-scale analysis on the Boolean cube `{0,1}^n`.
//!
//! The crate covers four layers that build on each other:
//!
//! * [`cube`]: dense functions on the cube, the Walsh–Hadamard transform,
//!   norms, entropy, the Dirichlet form and the heat semigroup `T_t`.
//! * [`curves`] and [`mgl`]: the nonlinear log-Sobolev curves `b_1`, `b_p`,
//!   `C` and the entropy-decay bound (Mrs. Gerber's lemma) built on them.
//! * [`hyper`]: hypercontractivity exponents improved for functions of small
//!   support.
//! * [`uncertainty`] and [`coding`]: principal angles between
//!   support-limited and band-limited subspaces, and the consequences for
//!   linear maps over GF(2) (see [`gf2`]).
//!
//! Index convention: bit `j` of a cube index is coordinate `x_j`. The same
//! convention is used for Fourier frequencies and for GF(2) row vectors.
//!
//! The crate is `no_std` (it needs `alloc`); transcendental functions come
//! from `libm`.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod binary;
pub mod coding;
pub mod cube;
pub mod curves;
mod error;
pub mod gf2;
pub mod hyper;
pub mod linalg;
pub mod mgl;
pub mod ode;
pub mod random;
pub mod uncertainty;

pub use crate::cube::{CubeFunction, Spectrum, MAX_DIM};
pub use crate::curves::CurveSamples;
pub use crate::error::Error;
pub use crate::gf2::Gf2Matrix;
pub use crate::uncertainty::SubsetSpec;

/// Crate-wide result alias.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Default relative tolerance used by verification routines.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
