//! Upper half-plane numerics.

pub mod circuit;
pub mod gardiner;
pub mod moebius;
pub mod special;

pub use circuit::*;
pub use gardiner::*;
pub use moebius::*;
pub use special::*;
