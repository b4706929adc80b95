pub mod bell;
pub mod error;
pub mod hamiltonian;
pub mod rng;
pub mod state;
pub mod trajectory;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
