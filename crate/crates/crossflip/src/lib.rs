//! Balanced triangulations and the moves between them: stellar subdivisions,
//! bistellar flips, cross-flips and shellable pseudo-cobordisms.

pub mod cli;
pub mod coloring;
pub mod core;
pub mod error;
pub mod flips;
pub mod io;
pub mod pipeline;
pub mod poset;
pub mod shelling;
pub mod subdivision;

pub use error::{Error, Result};
