//! Quadrature, bracketing root finding and scalar maximization.

mod optimize;
mod quadrature;
mod roots;

pub use optimize::{golden_section_max, Maximum};
pub use quadrature::{adaptive_gk15, GaussLegendre, Integral, QuadratureTolerance};
pub use roots::{brent, Root};
