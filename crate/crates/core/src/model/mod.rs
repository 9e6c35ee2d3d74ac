//! Factored state space, decisions, parameters and the immediate cost.

pub mod cost;
mod decision;
mod params;
pub mod state;

pub use cost::{safety_cost, task_cost, total_cost};
pub use decision::Decision;
pub use params::ModelParams;
pub use state::{FactoredState, Field, StateIndex, StateSpace, NUM_FIELDS};
