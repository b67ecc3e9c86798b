pub mod coefficients;
pub mod csv;
pub mod decoherence;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod numerics;
pub mod parallel;

pub use error::{Error, Result};
