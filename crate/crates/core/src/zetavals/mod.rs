//! Zeta values, height-one multiple zeta values, and Nielsen polylogarithms.

mod accel;
mod nielsen;
mod zeta;
mod zetapoly;

pub use accel::{alternating_sum, crvz, AcceleratedSum};
pub use nielsen::{kolbig_identity_residual, mzv_height_one, nielsen_s, s_value, sigma};
pub use zeta::{even_zeta_rational, zeta};
pub use zetapoly::{Monomial, ZetaPolynomial};
