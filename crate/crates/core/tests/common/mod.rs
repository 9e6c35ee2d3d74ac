//! Independent reference implementations used as test oracles. Nothing here calls the
//! library's transition code; the bookkeeping rules are written out as lookup tables.
#![allow(dead_code)]

use hrc_core::model::total_cost;
use hrc_core::{FactoredState, ModelConfig};

pub const EM: usize = 0;
pub const EA: usize = 1;
pub const TP: usize = 2;
pub const TC: usize = 3;
pub const TX: usize = 4;
pub const TY: usize = 5;
pub const HP: usize = 6;
pub const HC: usize = 7;
pub const BP: usize = 8;
pub const BC: usize = 9;
pub const D: usize = 10;

const CT: u8 = 3;
const DP: u8 = 4;
const DM: u8 = 5;
const RH1: u8 = 1;
const RH2: u8 = 2;

const H: u8 = 1;
const R: u8 = 2;
const HR: u8 = 3;

/// Counters that must be zero for a task of nature `x` (row) committed as `y` (column) to be
/// finished; 0 means it cannot finish.
const DONE_WHEN: [[u8; 4]; 4] = [[0, 0, R, R], [0, H, 0, H], [0, H, R, HR], [0, 0, 0, HR]];

/// May the human take up a task of nature `x` currently committed as `y`?
const HUMAN_OK: [[bool; 4]; 4] = [
    [false, false, false, false],
    [true, false, true, false],
    [true, false, true, false],
    [true, false, true, false],
];

/// May the robot take up a task of nature `x` currently committed as `y`?
const ROBOT_OK: [[bool; 4]; 4] = [
    [true, true, false, false],
    [false, false, false, false],
    [true, true, false, false],
    [true, true, false, false],
];

/// Next commitment indexed by `[y][human commits now][robot commits now]`.
const NEXT_Y: [[[u8; 2]; 2]; 4] = [
    [[0, 2], [1, 3]],
    [[1, 3], [1, 3]],
    [[2, 2], [1, 3]],
    [[3, 3], [1, 3]],
];

pub fn finished(s: &[u8; 11]) -> bool {
    let need = DONE_WHEN[s[TX] as usize][s[TY] as usize];
    need != 0 && (need & H == 0 || s[HC] == 0) && (need & R == 0 || s[BC] == 0)
}

pub fn human_ok(s: &[u8; 11]) -> bool {
    s[TP] != 0 && HUMAN_OK[s[TX] as usize][s[TY] as usize] && !finished(s)
}

pub fn robot_ok(s: &[u8; 11]) -> bool {
    s[TP] != 0 && ROBOT_OK[s[TX] as usize][s[TY] as usize] && !finished(s)
}

/// Task and activity bookkeeping; emotion and distance are copied.
pub fn step(s: &[u8; 11], decision: u8, human_flag: bool) -> [u8; 11] {
    let h = human_flag && human_ok(s);
    let r = decision == CT && robot_ok(s);
    let mut n = *s;
    n[HC] = if h { s[TC] } else { s[HC].saturating_sub(1) };
    n[BC] = if r { s[TC] } else { s[BC].saturating_sub(1) };
    n[HP] = match (h, s[HC]) {
        (true, _) => s[TP],
        (false, 0) => 0,
        (false, _) => s[HP],
    };
    n[BP] = match (r, s[BC]) {
        (true, _) => s[TP],
        (false, 0) => 0,
        (false, _) => s[BP],
    };
    n[TY] = NEXT_Y[s[TY] as usize][h as usize][r as usize];
    if finished(s) {
        n[TP] = 0;
        n[TC] = 0;
        n[TX] = 0;
        n[TY] = 0;
    }
    n
}

pub fn distance(d: u8, decision: u8, delta: i8) -> u8 {
    let d = d as i32;
    let delta = delta as i32;
    let v = if decision == DP {
        std::cmp::min(3, d + 1 - delta)
    } else if decision == DM {
        std::cmp::max(1, d - 1 - delta)
    } else {
        d - delta
    };
    v.clamp(0, 3) as u8
}

pub fn radices(rho: u8, sigma: u8) -> [usize; 11] {
    let (r, c) = (rho as usize + 1, sigma as usize + 1);
    [3, 3, r, c, 4, 4, r, c, r, c, 4]
}

pub fn index(s: &[u8; 11], rad: &[usize; 11]) -> usize {
    s.iter()
        .zip(rad)
        .fold(0, |acc, (&v, &r)| acc * r + v as usize)
}

pub fn unindex(mut i: usize, rad: &[usize; 11]) -> [u8; 11] {
    let mut s = [0u8; 11];
    for k in (0..11).rev() {
        s[k] = (i % rad[k]) as u8;
        i /= rad[k];
    }
    s
}

pub fn commit_probability(cfg: &ModelConfig, s: &[u8; 11], decision: u8) -> f64 {
    if !human_ok(s) {
        return 0.0;
    }
    let em = s[EM] as usize;
    let x = s[TX];
    match decision {
        RH1 => {
            if x == 1 || x == 2 {
                cfg.commit.solo[em]
            } else {
                0.0
            }
        }
        RH2 => {
            if x == 2 || x == 3 {
                cfg.commit.joint[em]
            } else {
                0.0
            }
        }
        _ => {
            if x != 0 {
                cfg.commit.spontaneous[em]
            } else {
                0.0
            }
        }
    }
}

/// Successor distribution by brute-force enumeration of every random outcome. Entries are
/// not merged.
pub fn successors(cfg: &ModelConfig, s: &[u8; 11], decision: u8) -> Vec<([u8; 11], f64)> {
    let dec = hrc_core::Decision::from_id(decision).unwrap();
    let pc = commit_probability(cfg, s, decision);
    let from_pair = 3 * s[EM] as usize + s[EA] as usize;
    let mut out = Vec::new();
    for (flag, pf) in [(false, 1.0 - pc), (true, pc)] {
        if pf == 0.0 {
            continue;
        }
        let base = step(s, decision, flag);
        for to_pair in 0..9 {
            let pe = cfg.emotion.table(dec)[from_pair][to_pair];
            if pe == 0.0 {
                continue;
            }
            for (k, delta) in [-1i8, 0, 1].into_iter().enumerate() {
                let pd = cfg.delta.rows[s[EA] as usize][k];
                if pd == 0.0 {
                    continue;
                }
                let mut n = base;
                n[EM] = (to_pair / 3) as u8;
                n[EA] = (to_pair % 3) as u8;
                n[D] = distance(s[D], decision, delta);
                out.push((n, pf * pe * pd));
            }
        }
    }
    out
}

pub struct Oracle {
    pub values: Vec<f64>,
    pub policy: Vec<u8>,
}

/// Backward induction over `horizon` stages from a zero terminal value, followed by the
/// greedy decision per state (lowest id on ties).
pub fn finite_horizon(cfg: &ModelConfig, horizon: usize) -> Oracle {
    let p = &cfg.params;
    let rad = radices(p.rho, p.sigma);
    let n: usize = rad.iter().product();
    let mut table: Vec<[Vec<(usize, f64)>; 8]> = Vec::with_capacity(n);
    let mut cost = Vec::with_capacity(n);
    for i in 0..n {
        let s = unindex(i, &rad);
        cost.push(total_cost(&FactoredState::from_array(s), p));
        table.push(std::array::from_fn(|d| {
            successors(cfg, &s, d as u8)
                .into_iter()
                .map(|(t, q)| (index(&t, &rad), q))
                .collect()
        }));
    }
    let q = |i: usize, d: usize, v: &[f64]| -> f64 {
        cost[i] + p.gamma * table[i][d].iter().map(|&(j, pr)| pr * v[j]).sum::<f64>()
    };
    let mut v = vec![0.0; n];
    for _ in 0..horizon {
        v = (0..n)
            .map(|i| (0..8).map(|d| q(i, d, &v)).fold(f64::INFINITY, f64::min))
            .collect();
    }
    let policy = (0..n)
        .map(|i| {
            let mut best = 0;
            for d in 1..8 {
                if q(i, d, &v) < q(i, best, &v) {
                    best = d;
                }
            }
            best as u8
        })
        .collect();
    Oracle { values: v, policy }
}

/// The reduced model used for oracle comparisons: one priority level, one-epoch tasks, no
/// random motion and emotions that never change.
pub fn reduced_config() -> ModelConfig {
    let mut cfg = ModelConfig::default();
    cfg.params.rho = 1;
    cfg.params.sigma = 1;
    cfg.delta = hrc_core::transition::DeltaModel::still();
    cfg.emotion = hrc_core::transition::EmotionModel::neutral();
    cfg
}

/// Smallest horizon with `gamma^H` below `bound`, padded so the truncation error is far below
/// the comparison tolerance.
pub fn horizon_for(gamma: f64, bound: f64) -> usize {
    let mut h = 0;
    let mut g = 1.0;
    while g >= bound {
        g *= gamma;
        h += 1;
    }
    2 * h
}

/// Checks `deterministic_step` against [`step`] for every state, decision and commit flag.
/// Returns the number of mismatches and the first one found.
pub fn transition_rule_mismatches(rho: u8, sigma: u8) -> (usize, Option<String>) {
    let rad = radices(rho, sigma);
    let n: usize = rad.iter().product();
    let mut count = 0;
    let mut first = None;
    for i in 0..n {
        let s = unindex(i, &rad);
        let fs = FactoredState::from_array(s);
        for d in 0..8u8 {
            let dec = hrc_core::Decision::from_id(d).unwrap();
            for flag in [false, true] {
                let got = hrc_core::transition::deterministic_step(&fs, dec, flag).to_array();
                let want = step(&s, d, flag);
                if got != want {
                    count += 1;
                    first.get_or_insert_with(|| {
                        format!("{fs} {dec} commit={flag}: got {got:?}, want {want:?}")
                    });
                }
            }
        }
    }
    (count, first)
}
