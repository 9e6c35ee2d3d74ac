//! Successor distributions for every (state, decision) pair.
//!
//! A step composes three independent random outcomes on top of deterministic bookkeeping:
//! the next emotion pair (drawn from [`EmotionModel`]), the human's random motion `Delta`
//! (drawn from [`DeltaModel`], conditioned on the current aggression level) and whether the
//! human takes up the task this epoch ([`CommitModel`]). Task arrivals are not modelled here;
//! they are injected by the simulator.

use crate::error::{Error, Result};
use crate::model::state::{commitment, nature};
use crate::model::{
    total_cost, Decision, FactoredState, Field, ModelParams, StateIndex, StateSpace,
};
use crate::solver::DecisionProcess;

const ROW_TOLERANCE: f64 = 1e-12;

/// Upper bound on the length of a successor list: 9 emotion pairs, 3 motions, 2 commit outcomes.
pub const MAX_SUCCESSORS: usize = 54;

fn check_row(key: &str, row: &[f64]) -> Result<()> {
    if let Some(bad) = row.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
        return Err(Error::invalid(
            key,
            format!("entry {bad} is not a probability"),
        ));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > ROW_TOLERANCE {
        return Err(Error::invalid(
            key,
            format!("row sums to {sum}, expected 1"),
        ));
    }
    Ok(())
}

fn check_probability(key: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(key, format!("{p} is not a probability")))
    }
}

/// `P(Delta | e_a)`; each row is ordered `[Delta = -1, Delta = 0, Delta = +1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaModel {
    pub rows: [[f64; 3]; 3],
}

impl Default for DeltaModel {
    /// More aggressive humans move around more.
    fn default() -> Self {
        Self {
            rows: [[0.1, 0.8, 0.1], [0.2, 0.6, 0.2], [0.3, 0.4, 0.3]],
        }
    }
}

impl DeltaModel {
    /// The human never moves on their own.
    pub fn still() -> Self {
        Self {
            rows: [[0.0, 1.0, 0.0]; 3],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (e_a, row) in self.rows.iter().enumerate() {
            check_row(&format!("delta.rows[{e_a}]"), row)?;
        }
        Ok(())
    }
}

/// `P(e_m', e_a' | e_m, e_a, D)` over the 9 emotion pairs, indexed `3 * e_m + e_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmotionModel {
    tables: [[[f64; 9]; 9]; Decision::COUNT],
}

fn identity_table() -> [[f64; 9]; 9] {
    let mut t = [[0.0; 9]; 9];
    for (i, row) in t.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    t
}

impl Default for EmotionModel {
    /// Motivating raises `e_m` by one level with probability 0.8; every other decision
    /// leaves the emotion pair untouched.
    fn default() -> Self {
        let mut model = Self::neutral();
        let mut mh = [[0.0; 9]; 9];
        for (from, row) in mh.iter_mut().enumerate() {
            let (em, ea) = (from / 3, from % 3);
            if em < 2 {
                row[from] = 0.2;
                row[3 * (em + 1) + ea] = 0.8;
            } else {
                row[from] = 1.0;
            }
        }
        model.tables[Decision::Motivate as usize] = mh;
        model
    }
}

impl EmotionModel {
    /// No decision changes the emotion pair.
    pub fn neutral() -> Self {
        Self {
            tables: [identity_table(); Decision::COUNT],
        }
    }

    /// Like the default but motivating always succeeds.
    pub fn certain_motivation() -> Self {
        let mut model = Self::neutral();
        let mut mh = [[0.0; 9]; 9];
        for (from, row) in mh.iter_mut().enumerate() {
            let (em, ea) = (from / 3, from % 3);
            row[3 * (em + 1).min(2) + ea] = 1.0;
        }
        model.tables[Decision::Motivate as usize] = mh;
        model
    }

    pub fn table(&self, d: Decision) -> &[[f64; 9]; 9] {
        &self.tables[d as usize]
    }

    pub fn set_table(&mut self, d: Decision, table: [[f64; 9]; 9]) {
        self.tables[d as usize] = table;
    }

    #[inline]
    pub fn row(&self, d: Decision, pair: usize) -> &[f64; 9] {
        &self.tables[d as usize][pair]
    }

    /// True when `d` never changes the emotion pair.
    pub fn is_neutral(&self, d: Decision) -> bool {
        self.tables[d as usize] == identity_table()
    }

    pub fn validate(&self) -> Result<()> {
        for d in Decision::ALL {
            for (pair, row) in self.table(d).iter().enumerate() {
                check_row(&format!("emotion.{d}[{pair}]"), row)?;
            }
        }
        Ok(())
    }
}

/// Probability that the human takes up the current task this epoch, by motivation level.
///
/// A solo request (`rh1`) is only accepted for tasks a human may do alone (human-only or
/// either), a joint request (`rh2`) only for tasks that admit collaboration (either or joint).
/// Spontaneous commitment under any other decision applies to every task except robot-only
/// ones. The human never commits twice to the same task and never to a finished one.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitModel {
    pub solo: [f64; 3],
    pub joint: [f64; 3],
    pub spontaneous: [f64; 3],
}

impl Default for CommitModel {
    fn default() -> Self {
        Self {
            solo: [0.0, 0.7, 0.95],
            joint: [0.0, 0.7, 0.95],
            spontaneous: [0.0; 3],
        }
    }
}

impl CommitModel {
    /// Requests are refused at low motivation and always accepted otherwise.
    pub fn certain() -> Self {
        Self {
            solo: [0.0, 1.0, 1.0],
            joint: [0.0, 1.0, 1.0],
            spontaneous: [0.0; 3],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, row) in [
            ("commit.solo", &self.solo),
            ("commit.joint", &self.joint),
            ("commit.spontaneous", &self.spontaneous),
        ] {
            for (em, p) in row.iter().enumerate() {
                check_probability(&format!("{name}[{em}]"), *p)?;
            }
        }
        Ok(())
    }

    pub fn probability(&self, s: &FactoredState, d: Decision) -> f64 {
        if !human_can_commit(s) {
            return 0.0;
        }
        let em = s.motivation as usize;
        let x = s.task_nature;
        match d {
            Decision::RequestSolo if x == nature::HUMAN_ONLY || x == nature::EITHER => {
                self.solo[em]
            }
            Decision::RequestJoint if x == nature::EITHER || x == nature::JOINT => self.joint[em],
            Decision::RequestSolo | Decision::RequestJoint => 0.0,
            _ if x != nature::ROBOT_ONLY => self.spontaneous[em],
            _ => 0.0,
        }
    }
}

/// How the human's commitment is decided for one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommitOverride {
    /// Sample from the [`CommitModel`].
    Model,
    /// Scripted outcome.
    Force(bool),
}

/// The committed agents have run their counters down to zero and the commitment matches the
/// task's nature; the task tuple resets on the next step.
pub fn task_finished(s: &FactoredState) -> bool {
    let y = s.task_commitment;
    let human_done = (y == commitment::HUMAN || y == commitment::JOINT) && s.human_remaining == 0;
    let robot_done = (y == commitment::ROBOT || y == commitment::JOINT) && s.robot_remaining == 0;
    match s.task_nature {
        nature::ROBOT_ONLY => robot_done,
        nature::HUMAN_ONLY => human_done,
        nature::EITHER => match y {
            commitment::HUMAN => human_done,
            commitment::ROBOT => robot_done,
            commitment::JOINT => human_done && robot_done,
            _ => false,
        },
        _ => y == commitment::JOINT && human_done && robot_done,
    }
}

/// An assigned, unfinished task that admits a human and that the human has not yet taken up.
pub fn human_can_commit(s: &FactoredState) -> bool {
    s.has_task()
        && s.task_nature != nature::ROBOT_ONLY
        && s.task_commitment != commitment::HUMAN
        && s.task_commitment != commitment::JOINT
        && !task_finished(s)
}

/// An assigned, unfinished task that admits the robot and that the robot does not already
/// hold. Elsewhere `ct` leaves the task and robot activity alone.
pub fn robot_can_commit(s: &FactoredState) -> bool {
    s.has_task()
        && s.task_nature != nature::HUMAN_ONLY
        && s.task_commitment != commitment::ROBOT
        && s.task_commitment != commitment::JOINT
        && !task_finished(s)
}

/// Task and activity bookkeeping for one step; emotion and distance are copied unchanged.
///
/// `human_commits` only takes effect when [`human_can_commit`] holds, and `ct` only when
/// [`robot_can_commit`] holds. When the current task is finished the whole task tuple resets
/// to zero.
pub fn deterministic_step(s: &FactoredState, d: Decision, human_commits: bool) -> FactoredState {
    let commits = human_commits && human_can_commit(s);
    let robot_commits = d == Decision::Commit && robot_can_commit(s);
    let mut next = *s;

    next.human_remaining = if commits {
        s.task_duration
    } else {
        s.human_remaining.saturating_sub(1)
    };
    next.robot_remaining = if robot_commits {
        s.task_duration
    } else {
        s.robot_remaining.saturating_sub(1)
    };
    next.human_priority = if commits {
        s.task_priority
    } else if s.human_remaining != 0 {
        s.human_priority
    } else {
        0
    };
    next.robot_priority = if robot_commits {
        s.task_priority
    } else if s.robot_remaining != 0 {
        s.robot_priority
    } else {
        0
    };

    let human_side =
        commits || s.task_commitment == commitment::HUMAN || s.task_commitment == commitment::JOINT;
    next.task_commitment = if human_side && robot_commits {
        commitment::JOINT
    } else if robot_commits {
        commitment::ROBOT
    } else if commits {
        commitment::HUMAN
    } else {
        s.task_commitment
    };

    if task_finished(s) {
        next.task_priority = 0;
        next.task_duration = 0;
        next.task_nature = 0;
        next.task_commitment = 0;
    }
    next
}

/// Next distance class given the decision and the human's motion `delta` in {-1, 0, 1}.
pub fn distance_step(d: u8, decision: Decision, delta: i8) -> u8 {
    let d = i16::from(d);
    let delta = i16::from(delta);
    let next = match decision {
        Decision::DistancePlus => (d + 1 - delta).min(3),
        Decision::DistanceMinus => (d - 1 - delta).max(1),
        _ => d - delta,
    };
    next.clamp(0, 3) as u8
}

/// The full stochastic model: parameters, tables and a cached immediate cost per state.
#[derive(Debug, Clone)]
pub struct TransitionModel {
    params: ModelParams,
    space: StateSpace,
    delta: DeltaModel,
    emotion: EmotionModel,
    commit: CommitModel,
    costs: Vec<f64>,
}

impl TransitionModel {
    pub fn new(
        params: ModelParams,
        delta: DeltaModel,
        emotion: EmotionModel,
        commit: CommitModel,
    ) -> Result<Self> {
        params.validate()?;
        delta.validate()?;
        emotion.validate()?;
        commit.validate()?;
        let space = StateSpace::new(&params);
        let costs = (0..space.len())
            .map(|i| total_cost(&space.state_at(i), &params))
            .collect();
        Ok(Self {
            params,
            space,
            delta,
            emotion,
            commit,
            costs,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn delta(&self) -> &DeltaModel {
        &self.delta
    }

    pub fn emotion(&self) -> &EmotionModel {
        &self.emotion
    }

    pub fn commit(&self) -> &CommitModel {
        &self.commit
    }

    /// Immediate cost `J` of the state at `index`.
    pub fn cost_at(&self, index: usize) -> f64 {
        self.costs[index]
    }

    /// Successor distribution of `s` under `d`, with duplicate successors merged.
    pub fn successors(&self, s: StateIndex, d: Decision) -> Result<Vec<(StateIndex, f64)>> {
        let state = self.space.decode(s)?;
        let mut out = Vec::with_capacity(MAX_SUCCESSORS);
        self.successors_into(&state, d, CommitOverride::Model, &mut out);
        Ok(out.into_iter().map(|(i, p)| (StateIndex(i), p)).collect())
    }

    /// Writes the successor distribution of `s` under `d` into `out` (cleared first). `s` must
    /// be a valid state of this model.
    pub fn successors_into(
        &self,
        s: &FactoredState,
        d: Decision,
        commit: CommitOverride,
        out: &mut Vec<(usize, f64)>,
    ) {
        out.clear();
        self.for_each_successor(s, d, commit, |index, p| {
            match out.iter_mut().find(|(i, _)| *i == index) {
                Some(entry) => entry.1 += p,
                None => out.push((index, p)),
            }
        });
    }

    /// Calls `f(index, probability)` for every outcome in a fixed order. The same successor
    /// may be reported more than once.
    #[inline]
    pub fn for_each_successor(
        &self,
        s: &FactoredState,
        d: Decision,
        commit: CommitOverride,
        mut f: impl FnMut(usize, f64),
    ) {
        let p_commit = match commit {
            CommitOverride::Model => self.commit.probability(s, d),
            CommitOverride::Force(true) => 1.0,
            CommitOverride::Force(false) => 0.0,
        };
        let emotion_row = self.emotion.row(d, s.emotion_index());
        let delta_row = &self.delta.rows[s.aggression as usize];
        let stride_m = self.space.stride(Field::Motivation);
        let stride_a = self.space.stride(Field::Aggression);
        let stride_d = self.space.stride(Field::Distance);

        let mut distances = [(0usize, 0.0f64); 3];
        let mut n_distances = 0;
        for (k, &p_d) in delta_row.iter().enumerate() {
            if p_d != 0.0 {
                let dist = distance_step(s.distance, d, k as i8 - 1);
                distances[n_distances] = (dist as usize * stride_d, p_d);
                n_distances += 1;
            }
        }

        for (flag, p_branch) in [(false, 1.0 - p_commit), (true, p_commit)] {
            if p_branch <= 0.0 {
                continue;
            }
            let mut base = deterministic_step(s, d, flag);
            base.motivation = 0;
            base.aggression = 0;
            base.distance = 0;
            let base_index = self.space.index_of(&base);
            for (pair, &p_e) in emotion_row.iter().enumerate() {
                if p_e == 0.0 {
                    continue;
                }
                let emotion_index = base_index + (pair / 3) * stride_m + (pair % 3) * stride_a;
                for &(offset, p_d) in &distances[..n_distances] {
                    f(emotion_index + offset, p_branch * p_e * p_d);
                }
            }
        }
    }
}

impl DecisionProcess for TransitionModel {
    fn num_states(&self) -> usize {
        self.space.len()
    }

    fn discount(&self) -> f64 {
        self.params.gamma
    }

    fn q_values(&self, state: usize, values: &[f64], q: &mut [f64; Decision::COUNT]) {
        let s = self.space.state_at(state);
        let cost = self.costs[state];
        let gamma = self.params.gamma;
        for d in Decision::ALL {
            let mut expected = 0.0;
            self.for_each_successor(&s, d, CommitOverride::Model, |i, p| {
                expected += p * values[i]
            });
            q[d as usize] = cost + gamma * expected;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn st(v: [u8; 11]) -> FactoredState {
        FactoredState::from_array(v)
    }

    fn degenerate_model(delta: DeltaModel) -> TransitionModel {
        TransitionModel::new(
            ModelParams::default(),
            delta,
            EmotionModel::neutral(),
            CommitModel {
                solo: [0.0; 3],
                joint: [0.0; 3],
                spontaneous: [0.0; 3],
            },
        )
        .unwrap()
    }

    #[test]
    fn human_counter_runs_down() {
        let s = st([1, 0, 0, 0, 0, 0, 1, 2, 0, 0, 2]);
        let next = deterministic_step(&s, Decision::NormalWork, false);
        assert_eq!(next.human_remaining, 1);
        assert_eq!(next.human_priority, 1);
    }

    #[test]
    fn robot_commit_sets_activity_from_task() {
        let s = st([1, 0, 2, 2, 2, 0, 0, 0, 0, 0, 2]);
        let alone = deterministic_step(&s, Decision::Commit, false);
        assert_eq!((alone.robot_remaining, alone.robot_priority), (2, 2));
        assert_eq!(alone.task_commitment, commitment::ROBOT);
        let together = deterministic_step(&s, Decision::Commit, true);
        assert_eq!(together.task_commitment, commitment::JOINT);
        assert_eq!((together.human_remaining, together.human_priority), (2, 2));
    }

    #[test]
    fn commit_after_human_makes_joint() {
        let s = st([1, 1, 1, 1, 3, 1, 1, 1, 0, 0, 1]);
        let next = deterministic_step(&s, Decision::Commit, false);
        assert_eq!(next.task_commitment, commitment::JOINT);
        assert_eq!(next.human_remaining, 0);
        assert_eq!(next.robot_remaining, 1);
    }

    #[test]
    fn finished_task_resets() {
        let s = st([1, 1, 1, 1, 3, 3, 1, 0, 1, 0, 2]);
        assert!(task_finished(&s));
        let next = deterministic_step(&s, Decision::DistancePlus, false);
        assert_eq!(next, st([1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 2]));
        // A joint task is not done by the robot alone.
        assert!(!task_finished(&st([0, 0, 1, 1, 3, 2, 0, 0, 1, 0, 1])));
        assert!(task_finished(&st([0, 0, 1, 1, 0, 2, 0, 0, 1, 0, 1])));
        assert!(!task_finished(&st([0, 0, 1, 1, 1, 2, 0, 0, 1, 0, 1])));
    }

    #[test]
    fn commitment_respects_task_nature() {
        // Human-only task: ct does nothing.
        let s = st([1, 0, 2, 2, 1, 0, 0, 0, 0, 0, 3]);
        assert!(!robot_can_commit(&s));
        let next = deterministic_step(&s, Decision::Commit, false);
        assert_eq!(next, deterministic_step(&s, Decision::NormalWork, false));
        // Robot-only task: a forced human commitment does nothing.
        let s = st([1, 0, 2, 2, 0, 0, 0, 0, 0, 0, 3]);
        assert!(!human_can_commit(&s));
        assert_eq!(deterministic_step(&s, Decision::NormalWork, true), s);
        // No task: nothing to commit to.
        let idle = st([1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3]);
        assert_eq!(deterministic_step(&idle, Decision::Commit, true), idle);
        // Already held by the robot: ct does not restart the counter.
        let held = st([1, 0, 2, 2, 2, 2, 0, 0, 2, 1, 3]);
        assert_eq!(
            deterministic_step(&held, Decision::Commit, false).robot_remaining,
            0
        );
    }

    #[test]
    fn distance_rules() {
        assert_eq!(distance_step(3, Decision::DistancePlus, 0), 3);
        assert_eq!(distance_step(2, Decision::DistanceMinus, -1), 2);
        assert_eq!(distance_step(1, Decision::NormalWork, 1), 0);
        assert_eq!(distance_step(3, Decision::NormalWork, -1), 3);
        assert_eq!(distance_step(0, Decision::DistancePlus, 1), 0);
        for d in 0..4 {
            for delta in -1..=1 {
                for dec in Decision::ALL {
                    let next = distance_step(d, dec, delta);
                    assert!(next <= 3);
                    if dec == Decision::DistanceMinus {
                        assert!(next >= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_tables_give_single_successor() {
        let tm = degenerate_model(DeltaModel::still());
        let s = st([1, 2, 1, 2, 3, 0, 0, 0, 0, 0, 2]);
        let i = tm.space().encode(&s).unwrap();
        let succ = tm.successors(i, Decision::NormalWork).unwrap();
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].1, 1.0);
        let expected = deterministic_step(&s, Decision::NormalWork, false);
        assert_eq!(tm.space().decode(succ[0].0).unwrap(), expected);
    }

    #[test]
    fn uniform_motion_spreads_distance() {
        let delta = DeltaModel {
            rows: [[1.0 / 3.0; 3]; 3],
        };
        let tm = TransitionModel::new(
            ModelParams::default(),
            delta,
            EmotionModel::neutral(),
            CommitModel {
                solo: [0.0; 3],
                joint: [0.0; 3],
                spontaneous: [0.0; 3],
            },
        )
        .unwrap();
        let s = st([0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2]);
        let succ = tm
            .successors(tm.space().encode(&s).unwrap(), Decision::NormalWork)
            .unwrap();
        let mut ds: Vec<(u8, f64)> = succ
            .iter()
            .map(|(i, p)| (tm.space().decode(*i).unwrap().distance, *p))
            .collect();
        ds.sort_by_key(|x| x.0);
        assert_eq!(ds.iter().map(|x| x.0).collect::<Vec<_>>(), [1, 2, 3]);
        for (_, p) in ds {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn merged_duplicates() {
        // At d=3 under nw, Delta=-1 is clamped back onto Delta=0.
        let tm = TransitionModel::new(
            ModelParams::default(),
            DeltaModel::default(),
            EmotionModel::neutral(),
            CommitModel::default(),
        )
        .unwrap();
        let s = st([0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 3]);
        let succ = tm
            .successors(tm.space().encode(&s).unwrap(), Decision::NormalWork)
            .unwrap();
        assert_eq!(succ.len(), 2);
        assert!((succ[0].1 - 0.7).abs() < 1e-12);
        let dp = tm
            .successors(tm.space().encode(&s).unwrap(), Decision::DistancePlus)
            .unwrap();
        assert_eq!(dp.len(), 1);
        let total: f64 = succ.iter().map(|x| x.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn neutral_decisions_keep_emotion() {
        let model = EmotionModel::default();
        for d in Decision::ALL {
            assert_eq!(model.is_neutral(d), d != Decision::Motivate, "{d}");
        }
    }

    #[test]
    fn malformed_tables_rejected() {
        let bad_delta = DeltaModel {
            rows: [[0.1, 0.8, 0.2], [0.2, 0.6, 0.2], [0.3, 0.4, 0.3]],
        };
        let err = TransitionModel::new(
            ModelParams::default(),
            bad_delta,
            EmotionModel::default(),
            CommitModel::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("delta.rows[0]"), "{err}");

        let mut emotion = EmotionModel::default();
        let mut table = *emotion.table(Decision::RequestSolo);
        table[4][4] = -0.5;
        table[4][5] = 1.5;
        emotion.set_table(Decision::RequestSolo, table);
        assert!(emotion.validate().is_err());

        let commit = CommitModel {
            solo: [0.0, 1.2, 1.0],
            ..Default::default()
        };
        assert!(commit
            .validate()
            .unwrap_err()
            .to_string()
            .contains("commit.solo[1]"));
    }

    fn random_row<const K: usize>(rng: &mut ChaCha8Rng) -> [f64; K] {
        let mut row = [0.0; K];
        for x in row.iter_mut() {
            // Sparse rows exercise the zero-skipping paths.
            *x = if rng.random_bool(0.3) {
                0.0
            } else {
                rng.random::<f64>()
            };
        }
        row[rng.random_range(0..K)] += 0.1;
        let sum: f64 = row.iter().sum();
        row.iter_mut().for_each(|x| *x /= sum);
        // Push the rounding residue into the largest entry.
        let residue = 1.0 - row.iter().sum::<f64>();
        let imax = (0..K).max_by(|&a, &b| row[a].total_cmp(&row[b])).unwrap();
        row[imax] += residue;
        row
    }

    #[test]
    fn random_tables_give_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut delta = DeltaModel::default();
        for row in delta.rows.iter_mut() {
            *row = random_row(&mut rng);
        }
        let mut emotion = EmotionModel::neutral();
        for d in Decision::ALL {
            let mut t = [[0.0; 9]; 9];
            for row in t.iter_mut() {
                *row = random_row(&mut rng);
            }
            emotion.set_table(d, t);
        }
        let commit = CommitModel {
            solo: [rng.random(), rng.random(), rng.random()],
            joint: [rng.random(), rng.random(), rng.random()],
            spontaneous: [rng.random(), rng.random(), rng.random()],
        };
        let tm = TransitionModel::new(ModelParams::default(), delta, emotion, commit).unwrap();
        let n = tm.space().len();
        for _ in 0..1000 {
            let s = StateIndex(rng.random_range(0..n));
            let d = Decision::ALL[rng.random_range(0..8)];
            let succ = tm.successors(s, d).unwrap();
            assert!(succ.len() <= MAX_SUCCESSORS);
            let total: f64 = succ.iter().map(|x| x.1).sum();
            assert!((total - 1.0).abs() < 1e-9, "{total}");
            for (i, p) in succ {
                assert!(p >= 0.0);
                let next = tm.space().decode(i).unwrap();
                next.validate(tm.params()).unwrap();
            }
        }
    }

    #[test]
    fn successor_invariants_hold_everywhere_small_space() {
        let params = ModelParams {
            rho: 1,
            sigma: 1,
            ..Default::default()
        };
        let tm = TransitionModel::new(
            params,
            DeltaModel::default(),
            EmotionModel::default(),
            CommitModel::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        for i in 0..tm.space().len() {
            let s = tm.space().state_at(i);
            for d in Decision::ALL {
                tm.successors_into(&s, d, CommitOverride::Model, &mut buf);
                let total: f64 = buf.iter().map(|x| x.1).sum();
                assert!((total - 1.0).abs() < 1e-9);
                let commit_prob = tm.commit().probability(&s, d);
                for &(j, _) in &buf {
                    let next = tm.space().state_at(j);
                    if commit_prob == 0.0 {
                        assert!(next.human_remaining <= s.human_remaining);
                        if d != Decision::Commit {
                            assert!(next.robot_remaining <= s.robot_remaining);
                        }
                    }
                    if s.task_commitment == commitment::JOINT && !task_finished(&s) {
                        assert_eq!(next.task_commitment, commitment::JOINT);
                    }
                    if tm.emotion().is_neutral(d) {
                        assert_eq!(next.emotion_index(), s.emotion_index());
                    }
                    if d == Decision::DistanceMinus {
                        assert!(next.distance >= 1);
                    }
                }
            }
        }
    }
}
