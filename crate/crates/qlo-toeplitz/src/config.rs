//! Run configuration: the instance record, candidate lower-bound sets,
//! ball radii, enabled checks, and the sampling seed.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::indicator::LowerBoundSet;
use crate::monoid::Monoid;
use crate::parse::parse_elem;
use crate::report::CheckKind;

/// Instance record `{kind, rank?, denominator_bound?}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator_bound: Option<u32>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown instance kind {0:?} (expected free_monoid, free_abelian, divisibility, half_line)")]
    UnknownKind(String),
    #[error("instance kind {0} requires field {1}")]
    MissingField(String, &'static str),
    #[error("field {0} out of range: {1}")]
    OutOfRange(&'static str, String),
    #[error("bad element {literal:?} in candidate set: {message}")]
    BadElement { literal: String, message: String },
    #[error("bad candidate set: {0}")]
    BadCandidate(String),
    #[error("unknown check name {0:?}")]
    UnknownCheck(String),
    #[error("config file error: {0}")]
    Io(#[from] std::io::Error),
    #[error("config is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl InstanceConfig {
    pub fn to_monoid(&self) -> Result<Monoid, ConfigError> {
        match self.kind.as_str() {
            "free_monoid" => {
                let rank = self
                    .rank
                    .ok_or(ConfigError::MissingField("free_monoid".into(), "rank"))?;
                if !(1..=26).contains(&rank) {
                    return Err(ConfigError::OutOfRange("rank", rank.to_string()));
                }
                Ok(Monoid::free_monoid(rank))
            }
            "free_abelian" => {
                let rank = self
                    .rank
                    .ok_or(ConfigError::MissingField("free_abelian".into(), "rank"))?;
                if !(1..=8).contains(&rank) {
                    return Err(ConfigError::OutOfRange("rank", rank.to_string()));
                }
                Ok(Monoid::free_abelian(rank))
            }
            "divisibility" => Ok(Monoid::divisibility()),
            "half_line" => {
                let d = self.denominator_bound.ok_or(ConfigError::MissingField(
                    "half_line".into(),
                    "denominator_bound",
                ))?;
                if d == 0 {
                    return Err(ConfigError::OutOfRange("denominator_bound", "0".into()));
                }
                Ok(Monoid::half_line(d))
            }
            other => Err(ConfigError::UnknownKind(other.to_string())),
        }
    }

    pub fn from_monoid(monoid: &Monoid) -> InstanceConfig {
        use crate::monoid::MonoidKind::*;
        match monoid.kind() {
            FreeMonoid { rank } => InstanceConfig {
                kind: "free_monoid".into(),
                rank: Some(rank),
                denominator_bound: None,
            },
            FreeAbelian { rank } => InstanceConfig {
                kind: "free_abelian".into(),
                rank: Some(rank),
                denominator_bound: None,
            },
            Divisibility => InstanceConfig {
                kind: "divisibility".into(),
                rank: None,
                denominator_bound: None,
            },
            HalfLine { max_denominator } => InstanceConfig {
                kind: "half_line".into(),
                rank: None,
                denominator_bound: Some(max_denominator),
            },
        }
    }
}

fn default_radius() -> u32 {
    3
}

fn default_max_cases() -> u64 {
    20_000_000
}

/// Everything a run needs; deserializes from the JSON schema documented in
/// the README.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub instance: InstanceConfig,
    /// Candidate exhaustive sets, as element literals. When empty, the
    /// generator set is used for the finitely generated instances.
    #[serde(default)]
    pub fesspe_candidates: Vec<Vec<String>>,
    /// Default ball radius for every check.
    #[serde(default = "default_radius")]
    pub radius: u32,
    /// Per-check radius overrides, keyed by check name.
    #[serde(default)]
    pub radii: BTreeMap<String, u32>,
    /// Enabled checks in the configured order; `None` enables all, in
    /// dependency order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    /// Seed for sampled sweeps; reports are byte-identical given the same
    /// config and seed.
    #[serde(default)]
    pub seed: u64,
    /// Sweeps whose full case count exceeds this are sampled.
    #[serde(default = "default_max_cases")]
    pub max_cases: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(instance: InstanceConfig) -> RunConfig {
        RunConfig {
            instance,
            fesspe_candidates: vec![],
            radius: default_radius(),
            radii: BTreeMap::new(),
            checks: None,
            seed: 0,
            max_cases: default_max_cases(),
            out: None,
        }
    }

    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
        RunConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Radius for one check: the override when present, the default
    /// otherwise.
    pub fn radius_for(&self, check: CheckKind) -> u32 {
        self.radii
            .get(check.name())
            .copied()
            .unwrap_or(self.radius)
    }

    /// The enabled checks in dependency order.
    pub fn enabled_checks(&self) -> Result<Vec<CheckKind>, ConfigError> {
        match &self.checks {
            None => Ok(CheckKind::all().to_vec()),
            Some(names) => names
                .iter()
                .map(|n| CheckKind::from_name(n).ok_or_else(|| ConfigError::UnknownCheck(n.clone())))
                .collect(),
        }
    }

    /// Parse the candidate sets against the instance; an empty list falls
    /// back to the generator set where one exists.
    pub fn candidate_sets(&self, monoid: &Monoid) -> Result<Vec<LowerBoundSet>, ConfigError> {
        if self.fesspe_candidates.is_empty() {
            let gens = monoid.generators();
            if gens.is_empty() {
                return Ok(vec![]);
            }
            return Ok(vec![LowerBoundSet::new(*monoid, gens)
                .expect("generator sets are valid candidates")]);
        }
        self.fesspe_candidates
            .iter()
            .map(|lits| {
                let elems = lits
                    .iter()
                    .map(|lit| {
                        parse_elem(monoid, lit).map_err(|e| ConfigError::BadElement {
                            literal: lit.clone(),
                            message: e.to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                LowerBoundSet::new(*monoid, elems)
                    .map_err(|e| ConfigError::BadCandidate(e.to_string()))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_roundtrip() {
        for m in [
            Monoid::free_monoid(2),
            Monoid::free_abelian(3),
            Monoid::divisibility(),
            Monoid::half_line(4),
        ] {
            let cfg = InstanceConfig::from_monoid(&m);
            assert_eq!(cfg.to_monoid().unwrap(), m);
        }
    }

    #[test]
    fn bad_instances_are_rejected() {
        let cfg = InstanceConfig {
            kind: "braid".into(),
            rank: None,
            denominator_bound: None,
        };
        assert!(matches!(cfg.to_monoid(), Err(ConfigError::UnknownKind(_))));
        let cfg = InstanceConfig {
            kind: "free_monoid".into(),
            rank: None,
            denominator_bound: None,
        };
        assert!(matches!(cfg.to_monoid(), Err(ConfigError::MissingField(..))));
    }

    #[test]
    fn config_json_roundtrip() {
        let text = r#"{
            "instance": {"kind": "free_monoid", "rank": 2},
            "fesspe_candidates": [["a", "b"]],
            "radius": 3,
            "seed": 42
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.radius, 3);
        assert_eq!(cfg.seed, 42);
        let monoid = cfg.instance.to_monoid().unwrap();
        let sets = cfg.candidate_sets(&monoid).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].len(), 2);
        let again = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(again.radius, cfg.radius);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"instance": {"kind": "divisibility"}, "radiu": 3}"#;
        assert!(RunConfig::from_json(text).is_err());
    }

    #[test]
    fn default_candidates_are_generators() {
        let cfg = RunConfig::new(InstanceConfig::from_monoid(&Monoid::free_abelian(2)));
        let m = cfg.instance.to_monoid().unwrap();
        let sets = cfg.candidate_sets(&m).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].len(), 2);
        let dv = RunConfig::new(InstanceConfig::from_monoid(&Monoid::divisibility()));
        assert!(dv
            .candidate_sets(&dv.instance.to_monoid().unwrap())
            .unwrap()
            .is_empty());
    }
}
