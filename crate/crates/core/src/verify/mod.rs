//! Certificates: V-complexes, the exact sign-vector cover, Ext-vanishing,
//! Cohen–Macaulayness and class counting.

pub mod chamber;
pub mod complex;

pub use chamber::*;
pub use complex::*;
pub mod ext;

pub use ext::*;
pub mod cm;

pub use cm::*;
pub mod modules;
pub mod paths;

pub use modules::*;
pub use paths::*;
pub mod moves;

pub use moves::*;
