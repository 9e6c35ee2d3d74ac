use std::fmt;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Number of variables in a factored state.
pub const NUM_FIELDS: usize = 11;

/// State variables in canonical (serialization and indexing) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Motivation,
    Aggression,
    TaskPriority,
    TaskDuration,
    TaskNature,
    TaskCommitment,
    HumanPriority,
    HumanRemaining,
    RobotPriority,
    RobotRemaining,
    Distance,
}

impl Field {
    pub const ALL: [Field; NUM_FIELDS] = [
        Field::Motivation,
        Field::Aggression,
        Field::TaskPriority,
        Field::TaskDuration,
        Field::TaskNature,
        Field::TaskCommitment,
        Field::HumanPriority,
        Field::HumanRemaining,
        Field::RobotPriority,
        Field::RobotRemaining,
        Field::Distance,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Field::Motivation => "e_m",
            Field::Aggression => "e_a",
            Field::TaskPriority => "tau_p",
            Field::TaskDuration => "tau_c",
            Field::TaskNature => "tau_x",
            Field::TaskCommitment => "tau_y",
            Field::HumanPriority => "h_p",
            Field::HumanRemaining => "h_c",
            Field::RobotPriority => "b_p",
            Field::RobotRemaining => "b_c",
            Field::Distance => "d",
        }
    }

    /// Largest admissible value of this field under `params`.
    pub fn max_value(self, params: &ModelParams) -> u8 {
        match self {
            Field::Motivation | Field::Aggression => 2,
            Field::TaskPriority | Field::HumanPriority | Field::RobotPriority => params.rho,
            Field::TaskDuration | Field::HumanRemaining | Field::RobotRemaining => params.sigma,
            Field::TaskNature | Field::TaskCommitment | Field::Distance => 3,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Values of `tau_x`.
pub mod nature {
    pub const ROBOT_ONLY: u8 = 0;
    pub const HUMAN_ONLY: u8 = 1;
    pub const EITHER: u8 = 2;
    pub const JOINT: u8 = 3;
}

/// Values of `tau_y`.
pub mod commitment {
    pub const NONE: u8 = 0;
    pub const HUMAN: u8 = 1;
    pub const ROBOT: u8 = 2;
    pub const JOINT: u8 = 3;
}

/// One point of the factored state space.
///
/// Human emotion (`motivation`, `aggression`) is hidden during online execution; every other
/// variable is observable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct FactoredState {
    pub motivation: u8,
    pub aggression: u8,
    pub task_priority: u8,
    pub task_duration: u8,
    pub task_nature: u8,
    pub task_commitment: u8,
    pub human_priority: u8,
    pub human_remaining: u8,
    pub robot_priority: u8,
    pub robot_remaining: u8,
    pub distance: u8,
}

impl FactoredState {
    /// Builds a state from its canonical vector, rejecting any out-of-range field.
    pub fn from_values(values: &[i64], params: &ModelParams) -> Result<Self> {
        if values.len() != NUM_FIELDS {
            return Err(Error::Arity {
                expected: NUM_FIELDS,
                found: values.len(),
            });
        }
        let mut out = [0u8; NUM_FIELDS];
        for ((slot, &value), field) in out.iter_mut().zip(values).zip(Field::ALL) {
            let max = field.max_value(params);
            if value < 0 || value > i64::from(max) {
                return Err(Error::FieldOutOfRange { field, value, max });
            }
            *slot = value as u8;
        }
        Ok(Self::from_array(out))
    }

    pub fn from_array(v: [u8; NUM_FIELDS]) -> Self {
        Self {
            motivation: v[0],
            aggression: v[1],
            task_priority: v[2],
            task_duration: v[3],
            task_nature: v[4],
            task_commitment: v[5],
            human_priority: v[6],
            human_remaining: v[7],
            robot_priority: v[8],
            robot_remaining: v[9],
            distance: v[10],
        }
    }

    pub fn to_array(&self) -> [u8; NUM_FIELDS] {
        [
            self.motivation,
            self.aggression,
            self.task_priority,
            self.task_duration,
            self.task_nature,
            self.task_commitment,
            self.human_priority,
            self.human_remaining,
            self.robot_priority,
            self.robot_remaining,
            self.distance,
        ]
    }

    pub fn get(&self, field: Field) -> u8 {
        self.to_array()[field as usize]
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        for (value, field) in self.to_array().into_iter().zip(Field::ALL) {
            let max = field.max_value(params);
            if value > max {
                return Err(Error::FieldOutOfRange {
                    field,
                    value: value.into(),
                    max,
                });
            }
        }
        Ok(())
    }

    /// Index 0..9 of the emotion pair, `3 * e_m + e_a`.
    pub fn emotion_index(&self) -> usize {
        3 * self.motivation as usize + self.aggression as usize
    }

    pub fn with_emotion_index(mut self, pair: usize) -> Self {
        debug_assert!(pair < 9);
        self.motivation = (pair / 3) as u8;
        self.aggression = (pair % 3) as u8;
        self
    }

    pub fn has_task(&self) -> bool {
        self.task_priority != 0
    }

    /// True when the observable fields (everything except emotion) agree.
    pub fn same_observable(&self, other: &FactoredState) -> bool {
        self.with_emotion_index(0) == other.with_emotion_index(0)
    }
}

impl fmt::Display for FactoredState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.to_array().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

/// Dense index of a factored state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateIndex(pub usize);

/// Mixed-radix indexing of the factored space. The first canonical field is the most
/// significant digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    radices: [usize; NUM_FIELDS],
    strides: [usize; NUM_FIELDS],
    len: usize,
}

impl StateSpace {
    pub fn new(params: &ModelParams) -> Self {
        let mut radices = [0usize; NUM_FIELDS];
        for (r, field) in radices.iter_mut().zip(Field::ALL) {
            *r = field.max_value(params) as usize + 1;
        }
        let mut strides = [0usize; NUM_FIELDS];
        let mut acc = 1usize;
        for i in (0..NUM_FIELDS).rev() {
            strides[i] = acc;
            acc *= radices[i];
        }
        Self {
            radices,
            strides,
            len: acc,
        }
    }

    /// Number of states `N`, the product of all field cardinalities.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn radices(&self) -> &[usize; NUM_FIELDS] {
        &self.radices
    }

    pub fn stride(&self, field: Field) -> usize {
        self.strides[field as usize]
    }

    /// Encodes a state that is already known to be in range.
    #[inline]
    pub fn index_of(&self, s: &FactoredState) -> usize {
        s.to_array()
            .iter()
            .zip(&self.strides)
            .map(|(&v, &stride)| v as usize * stride)
            .sum()
    }

    /// Decodes an index that is already known to be in range.
    #[inline]
    pub fn state_at(&self, index: usize) -> FactoredState {
        let mut out = [0u8; NUM_FIELDS];
        let mut rest = index;
        for i in (0..NUM_FIELDS).rev() {
            out[i] = (rest % self.radices[i]) as u8;
            rest /= self.radices[i];
        }
        FactoredState::from_array(out)
    }

    pub fn encode(&self, s: &FactoredState) -> Result<StateIndex> {
        for ((value, field), radix) in s.to_array().into_iter().zip(Field::ALL).zip(self.radices) {
            if value as usize >= radix {
                return Err(Error::FieldOutOfRange {
                    field,
                    value: value.into(),
                    max: (radix - 1) as u8,
                });
            }
        }
        Ok(StateIndex(self.index_of(s)))
    }

    pub fn decode(&self, index: StateIndex) -> Result<FactoredState> {
        if index.0 >= self.len {
            return Err(Error::IndexOutOfRange {
                index: index.0,
                len: self.len,
            });
        }
        Ok(self.state_at(index.0))
    }

    /// The state whose every field sits at its maximum.
    pub fn max_state(&self) -> FactoredState {
        let mut out = [0u8; NUM_FIELDS];
        for (o, r) in out.iter_mut().zip(self.radices) {
            *o = (r - 1) as u8;
        }
        FactoredState::from_array(out)
    }
}
