use std::fmt::{self, Write};
use std::str::FromStr;

use super::Mode;
use crate::belief::NUM_PAIRS;
use crate::error::{Error, Result};
use crate::model::{Decision, FactoredState};
use crate::transition::task_finished;

pub const CSV_HEADER: &str = "epoch,e_m,e_a,tau_p,tau_c,tau_x,tau_y,h_p,h_c,b_p,b_c,d,action,cost";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub epoch: usize,
    /// State at the start of the epoch, after that epoch's events.
    pub state: FactoredState,
    pub action: Decision,
    /// Belief over the emotion pair after this epoch's observation (POMDP mode).
    pub belief: Option<[f64; NUM_PAIRS]>,
    /// Immediate cost `J` of `state`.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub mode: Mode,
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceFormat {
    #[default]
    Csv,
    Table,
}

impl FromStr for TraceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TraceFormat::Csv),
            "table" => Ok(TraceFormat::Table),
            other => Err(Error::invalid(
                "format",
                format!("`{other}` is not csv or table"),
            )),
        }
    }
}

impl Trace {
    pub fn emit(&self, format: TraceFormat) -> String {
        match format {
            TraceFormat::Csv => self.to_csv(),
            TraceFormat::Table => self.to_table(),
        }
    }

    pub fn to_csv(&self) -> String {
        let pomdp = self.mode == Mode::Pomdp;
        let mut out = String::from(CSV_HEADER);
        if pomdp {
            for k in 1..=NUM_PAIRS {
                write!(out, ",b{k}").unwrap();
            }
        }
        out.push('\n');
        for row in &self.rows {
            write!(out, "{}", row.epoch).unwrap();
            for v in row.state.to_array() {
                write!(out, ",{v}").unwrap();
            }
            write!(out, ",{},{}", row.action, row.cost).unwrap();
            if pomdp {
                for p in row.belief.unwrap_or([f64::NAN; NUM_PAIRS]) {
                    write!(out, ",{p}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        write!(
            out,
            "{:>5}  {:<27} {:<6} {:>10}",
            "epoch", "state", "action", "cost"
        )
        .unwrap();
        if self.mode == Mode::Pomdp {
            out.push_str("  belief");
        }
        out.push('\n');
        for row in &self.rows {
            write!(
                out,
                "{:>5}  {:<27} {:<6} {:>10.4}",
                row.epoch,
                row.state.to_string(),
                row.action.to_string(),
                row.cost
            )
            .unwrap();
            if let Some(b) = row.belief {
                let cells: Vec<String> = b.iter().map(|p| format!("{p:.3}")).collect();
                write!(out, "  [{}]", cells.join(",")).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// One task as seen in a trace: from the first epoch it is assigned to the epoch after it
/// finished, when its tuple has been reset (and possibly replaced by the next task).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSummary {
    pub arrival: usize,
    pub priority: u8,
    pub duration: u8,
    pub nature: u8,
    /// Last nonzero commitment seen while the task was active, 0 if never committed.
    pub commitment: u8,
    pub committed_at: Option<usize>,
    pub completed_at: Option<usize>,
}

impl TaskSummary {
    pub fn epochs(&self) -> Option<usize> {
        self.completed_at.map(|c| c - self.arrival)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSummary {
    pub epochs: usize,
    pub tasks: Vec<TaskSummary>,
    pub min_distance: Option<u8>,
}

impl RunSummary {
    pub fn completed(&self) -> usize {
        self.tasks
            .iter()
            .filter(|t| t.completed_at.is_some())
            .count()
    }
}

pub fn summarize(trace: &Trace) -> RunSummary {
    let mut tasks: Vec<TaskSummary> = Vec::new();
    let mut active = false;
    let mut finished = false;
    for row in &trace.rows {
        let s = &row.state;
        if let Some(task) = tasks.last_mut() {
            if active && (finished || !s.has_task()) {
                task.completed_at = Some(row.epoch);
                active = false;
            }
        }
        if s.has_task() && !active {
            tasks.push(TaskSummary {
                arrival: row.epoch,
                priority: s.task_priority,
                duration: s.task_duration,
                nature: s.task_nature,
                commitment: 0,
                committed_at: None,
                completed_at: None,
            });
        }
        if let Some(task) = tasks.last_mut() {
            if s.has_task() && s.task_commitment != 0 {
                task.commitment = s.task_commitment;
                task.committed_at.get_or_insert(row.epoch);
            }
        }
        active = s.has_task();
        finished = task_finished(s);
    }
    RunSummary {
        epochs: trace.rows.len(),
        tasks,
        min_distance: trace.rows.iter().map(|r| r.state.distance).min(),
    }
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "epochs: {}, tasks completed: {}/{}",
            self.epochs,
            self.completed(),
            self.tasks.len()
        )?;
        for (i, t) in self.tasks.iter().enumerate() {
            let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
            writeln!(
                f,
                "task {}: arrived {}, priority {}, duration {}, nature {}, commitment {}, committed {}, completed {}, epochs {}",
                i + 1,
                t.arrival,
                t.priority,
                t.duration,
                t.nature,
                t.commitment,
                opt(t.committed_at),
                opt(t.completed_at),
                opt(t.epochs()),
            )?;
        }
        match self.min_distance {
            Some(d) => write!(f, "min distance: {d}"),
            None => write!(f, "min distance: -"),
        }
    }
}
