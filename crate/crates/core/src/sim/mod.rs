//! Closed-loop execution of a solved policy against a scripted scenario.
//!
//! Each epoch applies the scenario's events, picks a decision, logs the pre-transition state
//! and samples the successor. Transitions draw from one seeded ChaCha stream and sampled
//! observations from a second one, so a POMDP run that starts from the true emotion pair
//! makes the same draws as the corresponding MDP run.

mod scenario;
mod trace;

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::belief::{
    bayes_update, draw, predict_belief, samples_from_belief, select_action, ObservationModel,
};
use crate::error::{Error, Result};
use crate::model::{Decision, FactoredState};
use crate::solver::Policy;
use crate::transition::{CommitOverride, TransitionModel};

pub use scenario::{Event, Mode, Scenario, ScheduledEvent, CASE_STUDY};
pub use trace::{summarize, RunSummary, TaskSummary, Trace, TraceFormat, TraceRow};

fn transition_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn observation_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

fn check_inputs(sc: &Scenario, policy: &Policy, tm: &TransitionModel) -> Result<()> {
    sc.validate(tm.params())?;
    if policy.len() != tm.space().len() {
        return Err(Error::ProvenanceMismatch(format!(
            "policy covers {} states, model has {}",
            policy.len(),
            tm.space().len()
        )));
    }
    Ok(())
}

/// Exogenous part of one epoch.
struct Epoch {
    commit: CommitOverride,
    observation: Option<u8>,
}

/// Applies the events scheduled for `epoch` to `s`. Task arrivals wait in `pending` until no
/// task is active.
fn apply_events(
    sc: &Scenario,
    epoch: usize,
    s: &mut FactoredState,
    pending: &mut VecDeque<(u8, u8, u8)>,
) -> Epoch {
    let mut out = Epoch {
        commit: CommitOverride::Model,
        observation: None,
    };
    for event in sc.events_at(epoch) {
        match *event {
            Event::TaskArrival {
                priority,
                duration,
                nature,
            } => pending.push_back((priority, duration, nature)),
            Event::HumanCommit => out.commit = CommitOverride::Force(true),
            Event::Observation(o) => out.observation = Some(o),
            Event::SetEmotion {
                motivation,
                aggression,
            } => {
                s.motivation = motivation;
                s.aggression = aggression;
            }
        }
    }
    if !s.has_task() {
        if let Some((priority, duration, nature)) = pending.pop_front() {
            s.task_priority = priority;
            s.task_duration = duration;
            s.task_nature = nature;
            s.task_commitment = 0;
        }
    }
    out
}

fn step(
    tm: &TransitionModel,
    s: &FactoredState,
    d: Decision,
    commit: CommitOverride,
    buf: &mut Vec<(usize, f64)>,
    rng: &mut ChaCha8Rng,
) -> FactoredState {
    tm.successors_into(s, d, commit, buf);
    tm.space().state_at(draw(buf, rng))
}

/// Fully observable rollout: the policy sees the true state.
pub fn run_closed_loop(sc: &Scenario, policy: &Policy, tm: &TransitionModel) -> Result<Trace> {
    check_inputs(sc, policy, tm)?;
    let mut rng = transition_rng(sc.seed);
    let mut buf = Vec::new();
    let mut pending = VecDeque::new();
    let mut s = sc.initial_state;
    let mut rows = Vec::with_capacity(sc.horizon);
    for epoch in 1..=sc.horizon {
        let ex = apply_events(sc, epoch, &mut s, &mut pending);
        let index = tm.space().index_of(&s);
        let action = policy.action(index);
        rows.push(TraceRow {
            epoch,
            state: s,
            action,
            belief: None,
            cost: tm.cost_at(index),
        });
        s = step(tm, &s, action, ex.commit, &mut buf, &mut rng);
    }
    Ok(Trace {
        mode: Mode::Mdp,
        rows,
    })
}

/// Partially observable rollout. The true emotion pair evolves hidden; the robot keeps a
/// belief over it, updates it from one observation per epoch (scripted when the scenario
/// gives one, otherwise emitted by the true pair) and acts through the weighted-sample
/// heuristic. Between epochs the belief is predicted exactly through the transition model,
/// conditioned on the observable state actually reached.
pub fn run_pomdp_loop(
    sc: &Scenario,
    policy: &Policy,
    tm: &TransitionModel,
    om: &ObservationModel,
) -> Result<Trace> {
    check_inputs(sc, policy, tm)?;
    om.validate()?;
    let mut rng = transition_rng(sc.seed);
    let mut obs_rng = observation_rng(sc.seed);
    let mut buf = Vec::new();
    let mut pending = VecDeque::new();
    let mut s = sc.initial_state;
    let mut belief = sc.initial_belief;
    let mut rows = Vec::with_capacity(sc.horizon);
    for epoch in 1..=sc.horizon {
        let ex = apply_events(sc, epoch, &mut s, &mut pending);
        let observation = match ex.observation {
            Some(o) => o,
            None => om.sample(s.emotion_index(), &mut obs_rng),
        };
        belief = bayes_update(&belief, observation, om).map_err(|e| Error::Aborted {
            epoch,
            source: Box::new(e),
        })?;
        let samples = samples_from_belief(&belief, &s);
        let action = select_action(&samples, policy, tm.space())?;
        let index = tm.space().index_of(&s);
        rows.push(TraceRow {
            epoch,
            state: s,
            action,
            belief: Some(*belief.probs()),
            cost: tm.cost_at(index),
        });
        let next = step(tm, &s, action, ex.commit, &mut buf, &mut rng);
        belief = predict_belief(&samples, action, tm, ex.commit, &next);
        s = next;
    }
    Ok(Trace {
        mode: Mode::Pomdp,
        rows,
    })
}

/// Runs the scenario in its declared mode.
pub fn run(
    sc: &Scenario,
    policy: &Policy,
    tm: &TransitionModel,
    om: &ObservationModel,
) -> Result<Trace> {
    match sc.mode {
        Mode::Mdp => run_closed_loop(sc, policy, tm),
        Mode::Pomdp => run_pomdp_loop(sc, policy, tm, om),
    }
}
