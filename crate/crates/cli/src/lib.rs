//! File formats, benchmark harness and invariant checks around
//! [`tensor_jacobi_core`].

pub mod bench;
pub mod error;
pub mod format;
pub mod suite;
pub mod trajectory;
pub mod verify;

pub use error::{CliError, Result};
