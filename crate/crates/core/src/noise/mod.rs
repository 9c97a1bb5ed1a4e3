//! Stochastic Pauli noise for circuit execution.

mod exec;
mod model;

pub use exec::{noisy_execute, noisy_execute_seeded, schedule_layers, shot_rng};
pub use model::{depolarize, flip_readout, load_noise, parse_noise, NoiseModel};
