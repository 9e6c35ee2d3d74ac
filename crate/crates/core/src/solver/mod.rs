//! Synchronous value iteration for discounted-cost problems and greedy policy extraction.
//!
//! Each sweep reads a frozen copy of the previous value vector and writes a fresh one, so
//! states can be backed up in any order or in parallel and the result is bit-identical
//! either way.

mod policy_file;

use std::time::{Duration, Instant};

use crate::model::Decision;

pub use policy_file::{Policy, Provenance, HEADER_LEN, MAGIC, VERSION};

/// A finite discounted-cost decision process over dense state ids.
pub trait DecisionProcess: Sync {
    fn num_states(&self) -> usize;

    fn discount(&self) -> f64;

    /// Writes `Q(s, d) = c(s, d) + gamma * sum_s' P(s'|s,d) V(s')` for every decision.
    fn q_values(&self, state: usize, values: &[f64], q: &mut [f64; Decision::COUNT]);
}

/// Value and decision minimising the expected discounted cost at `state`. Ties go to the
/// lowest decision id.
pub fn bellman_backup<M: DecisionProcess + ?Sized>(
    mdp: &M,
    state: usize,
    values: &[f64],
) -> (f64, Decision) {
    let mut q = [0.0; Decision::COUNT];
    mdp.q_values(state, values, &mut q);
    argmin(&q)
}

fn argmin(q: &[f64; Decision::COUNT]) -> (f64, Decision) {
    let mut best = 0;
    for d in 1..Decision::COUNT {
        if q[d] < q[best] {
            best = d;
        }
    }
    (q[best], Decision::ALL[best])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is enabled, sequential otherwise.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub eta: f64,
    pub max_sweeps: usize,
    pub mode: SweepMode,
}

impl SolveOptions {
    pub fn new(eta: f64, max_sweeps: usize) -> Self {
        Self {
            eta,
            max_sweeps,
            mode: SweepMode::default(),
        }
    }

    pub fn with_mode(mut self, mode: SweepMode) -> Self {
        self.mode = mode;
        self
    }
}

/// Values indexed by state id, plus the sup-norm change recorded after every sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    pub values: Vec<f64>,
    pub sweep_count: usize,
    pub residual_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub states: usize,
    pub sweeps: usize,
    pub final_residual: f64,
    pub converged: bool,
    pub wall_time: Duration,
}

impl SolveReport {
    /// Residual after the given (1-based) sweep, if that many sweeps ran.
    pub fn residual_at(table: &ValueTable, sweep: usize) -> Option<f64> {
        sweep
            .checked_sub(1)
            .and_then(|i| table.residual_history.get(i))
            .copied()
    }
}

/// One synchronous sweep: `next[s] = min_d Q(s, d)` against `prev`. Returns the sup-norm
/// change.
pub fn sweep<M: DecisionProcess + ?Sized>(
    mdp: &M,
    prev: &[f64],
    next: &mut [f64],
    mode: SweepMode,
) -> f64 {
    let backup = |(s, slot): (usize, &mut f64)| {
        let (v, _) = bellman_backup(mdp, s, prev);
        *slot = v;
        (v - prev[s]).abs()
    };
    match mode {
        #[cfg(feature = "parallel")]
        SweepMode::Parallel => {
            use rayon::prelude::*;
            next.par_iter_mut()
                .enumerate()
                .with_min_len(1024)
                .map(backup)
                .reduce(|| 0.0, f64::max)
        }
        _ => next.iter_mut().enumerate().map(backup).fold(0.0, f64::max),
    }
}

/// Runs sweeps from `V = 0` until the sup-norm residual drops below `eta` or the sweep budget
/// is spent. A run that exhausts the budget returns the partial table with
/// `converged = false`.
pub fn value_iteration<M: DecisionProcess + ?Sized>(
    mdp: &M,
    options: &SolveOptions,
) -> (ValueTable, SolveReport) {
    let start = Instant::now();
    let n = mdp.num_states();
    let mut prev = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut history = Vec::new();
    let mut converged = false;

    while history.len() < options.max_sweeps {
        let residual = sweep(mdp, &prev, &mut next, options.mode);
        std::mem::swap(&mut prev, &mut next);
        history.push(residual);
        if residual < options.eta {
            converged = true;
            break;
        }
    }

    let report = SolveReport {
        states: n,
        sweeps: history.len(),
        final_residual: history.last().copied().unwrap_or(f64::INFINITY),
        converged,
        wall_time: start.elapsed(),
    };
    let table = ValueTable {
        values: prev,
        sweep_count: history.len(),
        residual_history: history,
    };
    (table, report)
}

/// Greedy decision per state against `values`, with the same tie rule as the backup.
pub fn extract_policy<M: DecisionProcess + ?Sized>(
    mdp: &M,
    values: &[f64],
    mode: SweepMode,
) -> Vec<Decision> {
    let n = mdp.num_states();
    let pick = |s: usize| bellman_backup(mdp, s, values).1;
    match mode {
        #[cfg(feature = "parallel")]
        SweepMode::Parallel => {
            use rayon::prelude::*;
            (0..n)
                .into_par_iter()
                .with_min_len(1024)
                .map(pick)
                .collect()
        }
        _ => (0..n).map(pick).collect(),
    }
}
