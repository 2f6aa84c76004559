//! Numerical kernel shared by the rest of the crate.

mod matrix;
mod quadrature;
mod random;
mod special;

pub use matrix::{logdet2_capacity, CMatrix, Cholesky};
pub use quadrature::{integrate, integrate_to_infinity, Quadrature};
pub use random::{stream_id, RandomStream};
pub use special::{erf, erf_inv, erfc, normal_cdf, normal_quantile};
