//! Simulation of measurement-based quantum computation and a homomorphic
//! delegation protocol built on it.
//!
//! Bit ordering: qubit 0 is the least significant bit of a basis index. Output
//! bit strings list the first output first.

pub mod angle;
pub mod compile;
pub mod error;
pub mod harness;
pub mod mbqc;
pub mod noise;
pub mod qfhe;
pub mod sim;

pub use angle::Angle;
pub use error::{Error, Result};
