//! Flat key-value config files.
//!
//! One `key = value` pair per line, `#` starts a comment. Floats use the
//! shortest round-trip formatting, so serializing and re-parsing a config
//! is lossless.

use std::collections::BTreeMap;
use std::path::Path;

use shadowboost::{LossKind, SimulationScenario};

use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KvMap(BTreeMap<String, String>);

impl KvMap {
    pub fn parse(text: &str) -> AppResult<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                AppError::Config(format!("line {}: expected 'key = value', got '{}'", lineno + 1, raw))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> AppResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Config(format!("{}: {}", path.display(), e)))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.0.insert(key.to_string(), value.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> AppResult<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                AppError::Config(format!("key '{}': cannot parse '{}'", key, raw))
            }),
        }
    }

    pub fn require<T: std::str::FromStr>(&self, key: &str) -> AppResult<T> {
        self.get_parsed(key)?
            .ok_or_else(|| AppError::Config(format!("missing required key '{}'", key)))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.0 {
            out.push_str(&format!("{} = {}\n", k, v));
        }
        out
    }
}

pub fn parse_loss(name: &str) -> AppResult<LossKind> {
    match name {
        "squared" => Ok(LossKind::SquaredError),
        "logistic" => Ok(LossKind::Logistic),
        other => Err(AppError::Config(format!(
            "unknown loss '{}' (expected 'squared' or 'logistic')",
            other
        ))),
    }
}

pub fn loss_name(loss: LossKind) -> &'static str {
    match loss {
        LossKind::SquaredError => "squared",
        LossKind::Logistic => "logistic",
    }
}

pub fn scenario_to_kv(s: &SimulationScenario) -> KvMap {
    let mut kv = KvMap::default();
    kv.set("n", s.n);
    kv.set("p", s.p);
    kv.set("p_inf", s.p_inf);
    kv.set("rho", s.rho);
    kv.set("replications", s.replications);
    kv.set("seed", s.seed);
    kv
}

pub fn scenario_from_kv(kv: &KvMap) -> AppResult<SimulationScenario> {
    let scenario = SimulationScenario {
        n: kv.require("n")?,
        p: kv.require("p")?,
        p_inf: kv.require("p_inf")?,
        rho: kv.require("rho")?,
        replications: kv.get_parsed("replications")?.unwrap_or(1),
        seed: kv.get_parsed("seed")?.unwrap_or(0),
    };
    scenario.validate().map_err(AppError::from)?;
    Ok(scenario)
}

/// Boosting parameters as they appear in config files and flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostSpec {
    pub nu: f64,
    pub m_stop: usize,
    pub loss: LossKind,
    pub center: bool,
}

pub fn boost_to_kv(b: &BoostSpec) -> KvMap {
    let mut kv = KvMap::default();
    kv.set("nu", b.nu);
    kv.set("m_stop", b.m_stop);
    kv.set("loss", loss_name(b.loss));
    kv.set("center", b.center);
    kv
}

pub fn boost_from_kv(kv: &KvMap) -> AppResult<BoostSpec> {
    Ok(BoostSpec {
        nu: kv.get_parsed("nu")?.unwrap_or(0.1),
        m_stop: kv.require("m_stop")?,
        loss: parse_loss(kv.get("loss").unwrap_or("squared"))?,
        center: kv.get_parsed("center")?.unwrap_or(true),
    })
}

/// Stability-selection parameters: exactly two of q / pi_thr / pfer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabSpec {
    pub b: usize,
    pub q: Option<usize>,
    pub pi_thr: Option<f64>,
    pub pfer: Option<f64>,
    pub m_stop_cap: usize,
}

pub fn stab_to_kv(s: &StabSpec) -> KvMap {
    let mut kv = KvMap::default();
    kv.set("b", s.b);
    if let Some(q) = s.q {
        kv.set("q", q);
    }
    if let Some(pi_thr) = s.pi_thr {
        kv.set("pi_thr", pi_thr);
    }
    if let Some(pfer) = s.pfer {
        kv.set("pfer", pfer);
    }
    kv.set("m_stop_cap", s.m_stop_cap);
    kv
}

pub fn stab_from_kv(kv: &KvMap) -> AppResult<StabSpec> {
    Ok(StabSpec {
        b: kv.get_parsed("b")?.unwrap_or(100),
        q: kv.get_parsed("q")?,
        pi_thr: kv.get_parsed("pi_thr")?,
        pfer: kv.get_parsed("pfer")?,
        m_stop_cap: kv.get_parsed("m_stop_cap")?.unwrap_or(5000),
    })
}

/// Bootstrap cross-validation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvSpec {
    pub folds: usize,
    pub m_max: usize,
}

pub fn cv_to_kv(c: &CvSpec) -> KvMap {
    let mut kv = KvMap::default();
    kv.set("folds", c.folds);
    kv.set("m_max", c.m_max);
    kv
}

pub fn cv_from_kv(kv: &KvMap) -> AppResult<CvSpec> {
    Ok(CvSpec {
        folds: kv.get_parsed("folds")?.unwrap_or(25),
        m_max: kv.get_parsed("m_max")?.unwrap_or(1000),
    })
}
