//! Box-ball soliton cellular automaton.
//!
//! Configurations evolve by carrier sweeps. Each configuration has a
//! Motzkin path, a plane forest and a stack permutation, and all of them
//! carry the same Young diagram of soliton lengths. The `random` and
//! `stats` modules sample Bernoulli configurations and compare the
//! resulting diagrams with their limit laws.

pub mod bitset;
pub mod config;
pub mod error;
pub mod forests;
pub mod paths;
pub mod permutations;
pub mod random;
pub mod stats;
pub mod young;

pub use bitset::PackedConfig;
pub use config::BoxBallConfig;
pub use error::{Error, Result};
pub use forests::RootedForest;
pub use paths::LatticePath;
pub use young::YoungDiagram;
