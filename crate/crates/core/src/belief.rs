//! Belief over the hidden emotion pair and the weighted-sample action heuristic.
//!
//! Only `(e_m, e_a)` is hidden, so a belief is a distribution over the nine emotion pairs
//! (state 1 = `[0,0]`, state 2 = `[0,1]`, ..., state 9 = `[2,2]`) and a sample set is the
//! exact enumeration of those pairs combined with the known observable fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Decision, FactoredState, StateSpace};
use crate::solver::Policy;
use crate::transition::{CommitOverride, TransitionModel};

pub const NUM_PAIRS: usize = 9;
pub const NUM_OBSERVATIONS: usize = 3;

const NORM_TOLERANCE: f64 = 1e-12;
/// Decision scores closer than this are treated as tied.
const SCORE_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeliefState {
    probs: [f64; NUM_PAIRS],
}

impl BeliefState {
    pub fn new(probs: [f64; NUM_PAIRS]) -> Result<Self> {
        if probs.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
            return Err(Error::invalid("belief", "entries must be nonnegative"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::invalid(
                "belief",
                format!("sums to {sum}, expected 1"),
            ));
        }
        Ok(Self { probs })
    }

    pub fn uniform() -> Self {
        Self {
            probs: [1.0 / NUM_PAIRS as f64; NUM_PAIRS],
        }
    }

    pub fn point_mass(pair: usize) -> Self {
        let mut probs = [0.0; NUM_PAIRS];
        probs[pair] = 1.0;
        Self { probs }
    }

    /// Normalises nonnegative weights; `None` when they are all zero.
    pub fn from_weights(weights: [f64; NUM_PAIRS]) -> Option<Self> {
        let total: f64 = weights.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return None;
        }
        Some(Self {
            probs: weights.map(|w| w / total),
        })
    }

    pub fn probs(&self) -> &[f64; NUM_PAIRS] {
        &self.probs
    }

    pub fn most_likely(&self) -> usize {
        (0..NUM_PAIRS)
            .max_by(|&a, &b| self.probs[a].total_cmp(&self.probs[b]).then(b.cmp(&a)))
            .unwrap()
    }
}

/// Likelihood rows, one per observation `O = 1..=3`, over the nine emotion pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationModel {
    pub rows: [[f64; NUM_PAIRS]; NUM_OBSERVATIONS],
}

impl Default for ObservationModel {
    /// Velocity levels: slow movement points to low emotions, fast movement to high ones.
    fn default() -> Self {
        Self {
            rows: [
                [0.8, 0.1, 0.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0],
                [0.0, 0.1, 0.0, 0.1, 0.7, 0.05, 0.0, 0.05, 0.0],
                [0.0, 0.0, 0.05, 0.0, 0.0, 0.1, 0.05, 0.1, 0.7],
            ],
        }
    }
}

impl ObservationModel {
    pub fn validate(&self) -> Result<()> {
        for (o, row) in self.rows.iter().enumerate() {
            let key = format!("observation.rows[{o}]");
            if row.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
                return Err(Error::invalid(key, "entries must be nonnegative"));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::invalid(
                    key,
                    format!("row sums to {sum}, expected 1"),
                ));
            }
        }
        for pair in 0..NUM_PAIRS {
            if self.rows.iter().all(|row| row[pair] == 0.0) {
                return Err(Error::invalid(
                    "observation.rows",
                    format!("emotion state {} can never be observed", pair + 1),
                ));
            }
        }
        Ok(())
    }

    pub fn likelihood(&self, observation: u8, pair: usize) -> f64 {
        self.rows[observation as usize - 1][pair]
    }

    /// Distribution of the observation emitted by the emotion pair `pair`, proportional to
    /// that pair's column.
    pub fn emission(&self, pair: usize) -> [f64; NUM_OBSERVATIONS] {
        let col = [self.rows[0][pair], self.rows[1][pair], self.rows[2][pair]];
        let total: f64 = col.iter().sum();
        col.map(|p| p / total)
    }

    pub fn sample(&self, pair: usize, rng: &mut impl Rng) -> u8 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let emission = self.emission(pair);
        for (o, p) in emission.iter().enumerate() {
            acc += p;
            if u < acc {
                return o as u8 + 1;
            }
        }
        // Rounding left `acc` a hair below 1.
        emission.iter().rposition(|&p| p > 0.0).unwrap() as u8 + 1
    }
}

fn check_observation(observation: u8) -> Result<()> {
    if (1..=NUM_OBSERVATIONS as u8).contains(&observation) {
        Ok(())
    } else {
        Err(Error::invalid(
            "observation",
            format!("{observation} not in 1..={NUM_OBSERVATIONS}"),
        ))
    }
}

/// Posterior proportional to prior times likelihood.
pub fn bayes_update(
    belief: &BeliefState,
    observation: u8,
    model: &ObservationModel,
) -> Result<BeliefState> {
    check_observation(observation)?;
    let mut weights = [0.0; NUM_PAIRS];
    for (pair, w) in weights.iter_mut().enumerate() {
        *w = belief.probs[pair] * model.likelihood(observation, pair);
    }
    BeliefState::from_weights(weights).ok_or(Error::InconsistentObservation { observation })
}

/// Weighted hypotheses about the full state. All samples share the observable fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub samples: Vec<(FactoredState, f64)>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Total weight per emotion pair.
    pub fn emotion_weights(&self) -> [f64; NUM_PAIRS] {
        let mut w = [0.0; NUM_PAIRS];
        for (s, weight) in &self.samples {
            w[s.emotion_index()] += weight;
        }
        w
    }
}

/// One sample per emotion pair with nonzero belief, carrying the known observable fields.
pub fn samples_from_belief(belief: &BeliefState, observable: &FactoredState) -> SampleSet {
    let samples = belief
        .probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(pair, &p)| (observable.with_emotion_index(pair), p))
        .collect();
    SampleSet { samples }
}

/// Sums sample weights per policy decision and returns the best-scoring decision. Ties go to
/// the decision backed by the single heaviest sample, then to the lowest decision id.
pub fn select_action(samples: &SampleSet, policy: &Policy, space: &StateSpace) -> Result<Decision> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let mut score = [0.0; Decision::COUNT];
    let mut heaviest = [f64::NEG_INFINITY; Decision::COUNT];
    for (state, w) in &samples.samples {
        let d = policy.action(space.index_of(state)) as usize;
        score[d] += w;
        heaviest[d] = heaviest[d].max(*w);
    }
    let top = score.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best = (0..Decision::COUNT)
        .filter(|&d| heaviest[d] > f64::NEG_INFINITY && top - score[d] <= SCORE_TIE)
        .reduce(|a, b| if heaviest[b] > heaviest[a] { b } else { a })
        .expect("at least one decision is backed by a sample");
    Ok(Decision::ALL[best])
}

/// Advances every sample by one draw from its successor distribution under `d`. Weights are
/// kept; the result depends only on the inputs and `seed`.
pub fn propagate_samples(
    samples: &SampleSet,
    d: Decision,
    model: &TransitionModel,
    seed: u64,
) -> SampleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = Vec::new();
    let samples = samples
        .samples
        .iter()
        .map(|(s, w)| {
            model.successors_into(s, d, CommitOverride::Model, &mut buf);
            let next = draw(&buf, &mut rng);
            (model.space().state_at(next), *w)
        })
        .collect();
    SampleSet { samples }
}

/// Exact one-step prediction of the emotion belief, conditioned on the observable part of the
/// state actually reached. Falls back to the unconditioned emotion marginal when no sample
/// could have produced `reached` (for example after a scripted event).
pub fn predict_belief(
    samples: &SampleSet,
    d: Decision,
    model: &TransitionModel,
    commit: CommitOverride,
    reached: &FactoredState,
) -> BeliefState {
    let mut conditioned = [0.0; NUM_PAIRS];
    let mut marginal = [0.0; NUM_PAIRS];
    for (s, w) in &samples.samples {
        model.for_each_successor(s, d, commit, |index, p| {
            let next = model.space().state_at(index);
            marginal[next.emotion_index()] += w * p;
            if next.same_observable(reached) {
                conditioned[next.emotion_index()] += w * p;
            }
        });
    }
    BeliefState::from_weights(conditioned)
        .or_else(|| BeliefState::from_weights(marginal))
        .unwrap_or_else(BeliefState::uniform)
}

/// Inverse-CDF draw from a successor list.
pub(crate) fn draw(dist: &[(usize, f64)], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(i, p) in dist {
        acc += p;
        if u < acc {
            return i;
        }
    }
    dist.iter()
        .rev()
        .find(|(_, p)| *p > 0.0)
        .map(|(i, _)| *i)
        .unwrap()
}
