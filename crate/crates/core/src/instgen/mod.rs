//! Deterministic, seeded benchmark instance generator with the five
//! parameter profiles (STD, TECHC, RAWC, SUP, CAP).

mod config;
mod generate;
mod rng;

pub use config::{ConfigError, GenConfig, Profile, DEFAULT_PARAMS};
pub use generate::{apply_profile, generate, sample_demand, sample_items};
pub use rng::{SplitMix64, Xoshiro256};
