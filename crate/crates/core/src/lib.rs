//! Factored MDP/POMDP model of a cobot sharing tasks with a human whose motivation and
//! aggression are hidden.
//!
//! The crate enumerates the factored state space, solves for the cost-minimising policy by
//! value iteration and replays that policy online, either with the full state visible or with
//! the emotion pair tracked through observations.

pub mod belief;
pub mod config;
pub mod error;
pub mod model;
pub mod sim;
pub mod solver;
pub mod transition;

pub use config::{ModelConfig, DEFAULT_CONFIG};
pub use error::{Error, Result};
pub use model::{Decision, FactoredState, Field, ModelParams, StateIndex, StateSpace};
pub use solver::{Policy, Provenance};
pub use transition::TransitionModel;
