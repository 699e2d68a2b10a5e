//! Decorated Teichmüller coordinates, Weil–Petersson forms and modular
//! tessellation sums, each checked against an independent exact or numeric
//! computation.

pub mod error;
pub mod exact;
pub mod surface;
pub mod coords;
pub mod symplectic;
pub mod hyperbolic;
pub mod realization;
pub mod modular;
pub mod io;
pub mod battery;
pub mod cli;

pub use error::{Error, Result};
