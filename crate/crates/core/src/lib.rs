//! Octonion arithmetic, octonionic monogenic (O-regular) periodic functions,
//! and Bergman/Szegő reproducing kernels of the unit ball, strip domains and
//! the right half-space, with Monte Carlo checks of their reproducing
//! properties.

pub mod algebra;
pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod regularity;
pub mod trig_series;

pub use algebra::{associator, Associator, Octonion};
pub use error::{Error, Result};
