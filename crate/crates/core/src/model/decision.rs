use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Robot decisions. Discriminants are the stable ids written to policy files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Decision {
    /// Normal work: keep the current activity, counters run down.
    NormalWork = 0,
    /// Ask the human to take the task alone.
    RequestSolo = 1,
    /// Ask the human to take the task together with the robot.
    RequestJoint = 2,
    /// Robot commits to the task.
    Commit = 3,
    /// Increase the human-robot distance.
    DistancePlus = 4,
    /// Decrease the human-robot distance.
    DistanceMinus = 5,
    /// Motivate the human.
    Motivate = 6,
    /// Idle.
    DoNothing = 7,
}

impl Decision {
    pub const COUNT: usize = 8;

    pub const ALL: [Decision; Self::COUNT] = [
        Decision::NormalWork,
        Decision::RequestSolo,
        Decision::RequestJoint,
        Decision::Commit,
        Decision::DistancePlus,
        Decision::DistanceMinus,
        Decision::Motivate,
        Decision::DoNothing,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.get(id as usize).copied()
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Decision::NormalWork => "nw",
            Decision::RequestSolo => "rh1",
            Decision::RequestJoint => "rh2",
            Decision::Commit => "ct",
            Decision::DistancePlus => "dp",
            Decision::DistanceMinus => "dm",
            Decision::Motivate => "mh",
            Decision::DoNothing => "dn",
        }
    }

    pub fn is_request(self) -> bool {
        matches!(self, Decision::RequestSolo | Decision::RequestJoint)
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

impl FromStr for Decision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|d| d.mnemonic() == s)
            .ok_or_else(|| Error::invalid("decision", format!("unknown decision `{s}`")))
    }
}
