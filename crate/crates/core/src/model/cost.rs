//! Immediate cost `J(s) = k1 * f1(s) + k2 * f2(s)`.
//!
//! `f1` scores task progress: uncommitted or wrongly assigned work, idle agents, low
//! motivation and outstanding activity. `f2` scores the lack of distance to the human,
//! weighted up by aggression and low motivation while the task is not a joint venture.

use crate::model::state::{commitment, nature};
use crate::model::{FactoredState, ModelParams};

#[inline]
fn ind(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// The seven bracketed terms of the task cost, in order.
pub fn task_cost_terms(s: &FactoredState, p: &ModelParams) -> [f64; 7] {
    let a = &p.alpha;
    let d = f64::from(s.distance);
    let hc = f64::from(s.human_remaining);
    let bc = f64::from(s.robot_remaining);
    let em = f64::from(s.motivation);
    let uncommitted = s.task_commitment == commitment::NONE;

    [
        a[0] * ind(s.task_commitment == commitment::JOINT) * d * hc * bc,
        (a[1] + a[2] * ind(s.robot_priority == 0) + a[3] * ind(s.human_priority == 0))
            * ind(uncommitted)
            * ind(s.task_priority != 0),
        a[4] * (2.0 - em) * ind(s.task_nature == nature::EITHER) * ind(uncommitted),
        a[5] * ind(s.task_nature == nature::JOINT) * ind(s.task_commitment != commitment::JOINT),
        a[6] * ind(s.task_priority > s.robot_priority) * ind(uncommitted),
        a[7] * bc,
        a[8] * hc,
    ]
}

/// The safety cost split into its linear distance term and the three emotion-gated terms.
pub fn safety_cost_terms(s: &FactoredState, p: &ModelParams) -> [f64; 4] {
    let b = &p.beta;
    let d = f64::from(s.distance);
    let ea = f64::from(s.aggression);
    let em = f64::from(s.motivation);
    let gate = ind(s.task_commitment != commitment::JOINT);

    [
        b[0] * (3.0 - d),
        gate * b[1] * (b[2] * (ea - 3.0) * d).exp(),
        gate * b[3] * (-b[4] * (em + 1.0) * d).exp(),
        gate * ea * b[5] * (-d).exp(),
    ]
}

pub fn task_cost(s: &FactoredState, p: &ModelParams) -> f64 {
    task_cost_terms(s, p).iter().sum()
}

pub fn safety_cost(s: &FactoredState, p: &ModelParams) -> f64 {
    safety_cost_terms(s, p).iter().sum()
}

pub fn total_cost(s: &FactoredState, p: &ModelParams) -> f64 {
    p.k1 * task_cost(s, p) + p.k2 * safety_cost(s, p)
}
