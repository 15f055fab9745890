//! Asymptotic expansions of `I_n = ∫₀¹ f(u)(1 + q·uⁿ)^{w/n} du` in powers of `1/n`,
//! with Nielsen polylogarithm and multiple zeta value coefficients.

pub mod appell;
pub mod bigfloat;
pub mod error;
pub mod exactnum;
pub mod expansion;
pub mod par;
pub mod quadrature;
pub mod registry;
pub mod scalar;
pub mod symmetry;
pub mod verify;
pub mod zetavals;

pub use bigfloat::BigFloat;
pub use error::{Error, Result};
pub use scalar::{Prefactor, Scalar};
