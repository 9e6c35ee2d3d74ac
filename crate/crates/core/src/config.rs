//! TOML model configuration.
//!
//! Every key is optional and falls back to the built-in default. The embedded
//! [`DEFAULT_CONFIG`] documents each key and parses to [`ModelConfig::default`].

use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::belief::ObservationModel;
use crate::error::{Error, Result};
use crate::model::{Decision, ModelParams, StateSpace};
use crate::solver::Provenance;
use crate::transition::{CommitModel, DeltaModel, EmotionModel, TransitionModel};

pub const DEFAULT_CONFIG: &str = include_str!("default_config.toml");

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    rho: Option<i64>,
    sigma: Option<i64>,
    alpha: Option<Vec<f64>>,
    beta: Option<Vec<f64>>,
    k1: Option<f64>,
    k2: Option<f64>,
    gamma: Option<f64>,
    eta: Option<f64>,
    max_sweeps: Option<i64>,
    delta: Option<RawRows>,
    emotion: Option<RawEmotion>,
    commit: Option<RawCommit>,
    observation: Option<RawRows>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRows {
    rows: Vec<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEmotion {
    nw: Option<Vec<Vec<f64>>>,
    rh1: Option<Vec<Vec<f64>>>,
    rh2: Option<Vec<Vec<f64>>>,
    ct: Option<Vec<Vec<f64>>>,
    dp: Option<Vec<Vec<f64>>>,
    dm: Option<Vec<Vec<f64>>>,
    mh: Option<Vec<Vec<f64>>>,
    dn: Option<Vec<Vec<f64>>>,
}

impl RawEmotion {
    fn take(self) -> [Option<Vec<Vec<f64>>>; Decision::COUNT] {
        [
            self.nw, self.rh1, self.rh2, self.ct, self.dp, self.dm, self.mh, self.dn,
        ]
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCommit {
    solo: Option<Vec<f64>>,
    joint: Option<Vec<f64>>,
    spontaneous: Option<Vec<f64>>,
}

fn fixed<const N: usize>(key: &str, v: Vec<f64>) -> Result<[f64; N]> {
    let len = v.len();
    v.try_into()
        .map_err(|_| Error::invalid(key, format!("expected {N} values, found {len}")))
}

fn matrix<const R: usize, const C: usize>(key: &str, v: Vec<Vec<f64>>) -> Result<[[f64; C]; R]> {
    if v.len() != R {
        return Err(Error::invalid(
            key,
            format!("expected {R} rows, found {}", v.len()),
        ));
    }
    let mut out = [[0.0; C]; R];
    for (i, row) in v.into_iter().enumerate() {
        out[i] = fixed(&format!("{key}[{i}]"), row)?;
    }
    Ok(out)
}

fn level(key: &str, v: i64) -> Result<u8> {
    u8::try_from(v)
        .ok()
        .filter(|&x| (1..=15).contains(&x))
        .ok_or_else(|| Error::invalid(key, format!("{v} not in 1..=15")))
}

/// Parameters plus every stochastic table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModelConfig {
    pub params: ModelParams,
    pub delta: DeltaModel,
    pub emotion: EmotionModel,
    pub commit: CommitModel,
    pub observation: ObservationModel,
}

impl ModelConfig {
    /// Default coefficients with the randomness removed: the human never moves, motivating
    /// always works and motivated humans always accept requests.
    pub fn deterministic() -> Self {
        Self {
            delta: DeltaModel::still(),
            emotion: EmotionModel::certain_motivation(),
            commit: CommitModel::certain(),
            ..Self::default()
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut cfg = Self::default();
        let p = &mut cfg.params;
        if let Some(v) = raw.rho {
            p.rho = level("rho", v)?;
        }
        if let Some(v) = raw.sigma {
            p.sigma = level("sigma", v)?;
        }
        if let Some(v) = raw.alpha {
            p.alpha = fixed("alpha", v)?;
        }
        if let Some(v) = raw.beta {
            p.beta = fixed("beta", v)?;
        }
        p.k1 = raw.k1.unwrap_or(p.k1);
        p.k2 = raw.k2.unwrap_or(p.k2);
        p.gamma = raw.gamma.unwrap_or(p.gamma);
        p.eta = raw.eta.unwrap_or(p.eta);
        if let Some(v) = raw.max_sweeps {
            p.max_sweeps = usize::try_from(v)
                .ok()
                .filter(|&x| x > 0)
                .ok_or_else(|| Error::invalid("max_sweeps", format!("{v} must be positive")))?;
        }
        if let Some(d) = raw.delta {
            cfg.delta.rows = matrix("delta.rows", d.rows)?;
        }
        if let Some(e) = raw.emotion {
            for (d, table) in Decision::ALL.into_iter().zip(e.take()) {
                if let Some(t) = table {
                    cfg.emotion
                        .set_table(d, matrix(&format!("emotion.{d}"), t)?);
                }
            }
        }
        if let Some(c) = raw.commit {
            if let Some(v) = c.solo {
                cfg.commit.solo = fixed("commit.solo", v)?;
            }
            if let Some(v) = c.joint {
                cfg.commit.joint = fixed("commit.joint", v)?;
            }
            if let Some(v) = c.spontaneous {
                cfg.commit.spontaneous = fixed("commit.spontaneous", v)?;
            }
        }
        if let Some(o) = raw.observation {
            cfg.observation.rows = matrix("observation.rows", o.rows)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.delta.validate()?;
        self.emotion.validate()?;
        self.commit.validate()?;
        self.observation.validate()
    }

    pub fn build_transition_model(&self) -> Result<TransitionModel> {
        TransitionModel::new(
            self.params.clone(),
            self.delta.clone(),
            self.emotion.clone(),
            self.commit.clone(),
        )
    }

    /// SHA-256 over everything that shapes the optimal policy: cardinalities, cost
    /// coefficients, discount and the transition tables. Solver tolerances and the
    /// observation model are excluded.
    pub fn provenance_hash(&self) -> [u8; 32] {
        let p = &self.params;
        let mut h = Sha256::new();
        h.update(b"hrc-model-v1");
        h.update([p.rho, p.sigma]);
        let mut put = |x: f64| h.update(x.to_le_bytes());
        p.alpha.iter().chain(&p.beta).for_each(|&x| put(x));
        [p.k1, p.k2, p.gamma].into_iter().for_each(&mut put);
        self.delta.rows.iter().flatten().for_each(|&x| put(x));
        for d in Decision::ALL {
            self.emotion.table(d).iter().flatten().for_each(|&x| put(x));
        }
        let c = &self.commit;
        c.solo
            .iter()
            .chain(&c.joint)
            .chain(&c.spontaneous)
            .for_each(|&x| put(x));
        h.finalize().into()
    }

    pub fn provenance(&self) -> Provenance {
        Provenance::new(&StateSpace::new(&self.params), self.provenance_hash())
    }
}
