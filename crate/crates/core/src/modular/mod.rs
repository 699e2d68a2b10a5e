//! The modular tessellation: integer lines, orbit enumeration, the Dedekind
//! distance relation and the level-two gradient pairing.

pub mod dedekind;
pub mod enumerate;
pub mod gamma2;
pub mod lines;

pub use dedekind::*;
pub use enumerate::*;
pub use lines::*;
