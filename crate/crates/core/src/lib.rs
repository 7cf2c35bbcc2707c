#[cfg(feature = "cli")]
pub mod cli;
pub mod conelib;
pub mod error;
pub mod lmi;
pub mod oracle;
pub mod sampling;
pub mod sdpsolve;
pub mod symlin;
pub mod verify;

pub use error::{Error, Result};
