use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::belief::{BeliefState, NUM_OBSERVATIONS, NUM_PAIRS};
use crate::error::{Error, Result};
use crate::model::{FactoredState, ModelParams, NUM_FIELDS};

pub const CASE_STUDY: &str = include_str!("case_study.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// The true state, emotions included, is visible to the policy.
    #[default]
    Mdp,
    /// Emotions are hidden and tracked through observations.
    Pomdp,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mdp" => Ok(Mode::Mdp),
            "pomdp" => Ok(Mode::Pomdp),
            other => Err(Error::invalid(
                "mode",
                format!("`{other}` is not mdp or pomdp"),
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Mdp => "mdp",
            Mode::Pomdp => "pomdp",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Event {
    /// A new task. Deferred while another task is still active.
    TaskArrival {
        priority: u8,
        duration: u8,
        nature: u8,
    },
    /// The human takes up the current task on this epoch's step.
    HumanCommit,
    /// Scripted observation for this epoch (POMDP mode only).
    Observation(u8),
    /// Overrides the true emotion pair.
    SetEmotion { motivation: u8, aggression: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduledEvent {
    pub epoch: usize,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub initial_state: FactoredState,
    /// Belief over the emotion pair at epoch 1 (POMDP mode). Defaults to uniform.
    pub initial_belief: BeliefState,
    pub events: Vec<ScheduledEvent>,
    pub mode: Mode,
    pub horizon: usize,
    pub seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    horizon: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    mode: Option<String>,
    initial_state: Vec<i64>,
    #[serde(default)]
    initial_belief: Option<Vec<f64>>,
    #[serde(default)]
    events: Vec<RawEvent>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawEvent {
    TaskArrival {
        epoch: usize,
        priority: u8,
        duration: u8,
        nature: u8,
    },
    HumanCommit {
        epoch: usize,
    },
    Observation {
        epoch: usize,
        value: u8,
    },
    SetEmotion {
        epoch: usize,
        motivation: u8,
        aggression: u8,
    },
}

impl From<RawEvent> for ScheduledEvent {
    fn from(raw: RawEvent) -> Self {
        let (epoch, event) = match raw {
            RawEvent::TaskArrival {
                epoch,
                priority,
                duration,
                nature,
            } => (
                epoch,
                Event::TaskArrival {
                    priority,
                    duration,
                    nature,
                },
            ),
            RawEvent::HumanCommit { epoch } => (epoch, Event::HumanCommit),
            RawEvent::Observation { epoch, value } => (epoch, Event::Observation(value)),
            RawEvent::SetEmotion {
                epoch,
                motivation,
                aggression,
            } => (
                epoch,
                Event::SetEmotion {
                    motivation,
                    aggression,
                },
            ),
        };
        ScheduledEvent { epoch, event }
    }
}

impl Scenario {
    /// Parses a scenario. Field ranges are checked later against the model by
    /// [`Scenario::validate`], since they depend on `rho` and `sigma`.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        if raw.initial_state.len() != NUM_FIELDS {
            return Err(Error::Scenario(format!(
                "initial_state: expected {NUM_FIELDS} values, found {}",
                raw.initial_state.len()
            )));
        }
        let mut values = [0u8; NUM_FIELDS];
        for (slot, &v) in values.iter_mut().zip(&raw.initial_state) {
            *slot = u8::try_from(v)
                .map_err(|_| Error::Scenario(format!("initial_state: {v} is out of range")))?;
        }
        let initial_belief = match raw.initial_belief {
            None => BeliefState::uniform(),
            Some(v) => {
                let probs: [f64; NUM_PAIRS] = v.try_into().map_err(|v: Vec<f64>| {
                    Error::Scenario(format!(
                        "initial_belief: expected {NUM_PAIRS} values, found {}",
                        v.len()
                    ))
                })?;
                BeliefState::new(probs)
                    .map_err(|e| Error::Scenario(format!("initial_belief: {e}")))?
            }
        };
        let mode = raw
            .mode
            .as_deref()
            .map(str::parse)
            .transpose()?
            .unwrap_or_default();
        let scenario = Self {
            initial_state: FactoredState::from_array(values),
            initial_belief,
            events: raw.events.into_iter().map(ScheduledEvent::from).collect(),
            mode,
            horizon: raw.horizon,
            seed: raw.seed,
        };
        scenario.check_schedule()?;
        Ok(scenario)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// The built-in three-task script.
    pub fn case_study() -> Self {
        Self::from_toml_str(CASE_STUDY).expect("built-in scenario is valid")
    }

    fn check_schedule(&self) -> Result<()> {
        let mut last = 0;
        for e in &self.events {
            if e.epoch == 0 || e.epoch > self.horizon {
                return Err(Error::Scenario(format!(
                    "event at epoch {} outside 1..={}",
                    e.epoch, self.horizon
                )));
            }
            if e.epoch < last {
                return Err(Error::Scenario(format!(
                    "events not sorted: epoch {} after epoch {last}",
                    e.epoch
                )));
            }
            last = e.epoch;
        }
        Ok(())
    }

    /// Checks every state field and event payload against the model's ranges.
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        self.check_schedule()?;
        self.initial_state
            .validate(params)
            .map_err(|e| Error::Scenario(format!("initial_state: {e}")))?;
        let mut observations_at = Vec::new();
        for e in &self.events {
            let bad = |what: String| Error::Scenario(format!("event at epoch {}: {what}", e.epoch));
            match e.event {
                Event::TaskArrival {
                    priority,
                    duration,
                    nature,
                } => {
                    if !(1..=params.rho).contains(&priority) {
                        return Err(bad(format!(
                            "priority {priority} not in 1..={}",
                            params.rho
                        )));
                    }
                    if !(1..=params.sigma).contains(&duration) {
                        return Err(bad(format!(
                            "duration {duration} not in 1..={}",
                            params.sigma
                        )));
                    }
                    if nature > 3 {
                        return Err(bad(format!("nature {nature} not in 0..=3")));
                    }
                }
                Event::Observation(o) => {
                    if !(1..=NUM_OBSERVATIONS as u8).contains(&o) {
                        return Err(bad(format!(
                            "observation {o} not in 1..={NUM_OBSERVATIONS}"
                        )));
                    }
                    if observations_at.contains(&e.epoch) {
                        return Err(bad("more than one observation".into()));
                    }
                    observations_at.push(e.epoch);
                }
                Event::SetEmotion {
                    motivation,
                    aggression,
                } => {
                    if motivation > 2 || aggression > 2 {
                        return Err(bad(format!(
                            "emotion ({motivation}, {aggression}) out of range"
                        )));
                    }
                }
                Event::HumanCommit => {}
            }
        }
        Ok(())
    }

    pub fn events_at(&self, epoch: usize) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(move |e| e.epoch == epoch)
            .map(|e| &e.event)
    }
}
