//! Check identities, verdicts, and the run report.
//!
//! Reports are deterministic: given the same config and seed, reruns are
//! byte-identical. Wall-clock timings therefore go to stderr, never into
//! the report.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::InstanceConfig;

/// The checks the runner knows, in dependency order: order axioms first,
/// then exhaustivity, then the monomial layer, then the lemma suites,
/// then the census.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    QloAxioms,
    TranslatedJoins,
    Fesspe,
    ChiFormula,
    NicaCovariance,
    MonomialOracle,
    FourCaseCommutation,
    SumToIdentity,
    RankOneSystem,
    IdealClosure,
    PartitionConverse,
    CommutantDimension,
    TruncationOracle,
    SpectrumCensus,
}

impl CheckKind {
    pub fn all() -> [CheckKind; 14] {
        use CheckKind::*;
        [
            QloAxioms,
            TranslatedJoins,
            Fesspe,
            ChiFormula,
            NicaCovariance,
            MonomialOracle,
            FourCaseCommutation,
            SumToIdentity,
            RankOneSystem,
            IdealClosure,
            PartitionConverse,
            CommutantDimension,
            TruncationOracle,
            SpectrumCensus,
        ]
    }

    pub fn name(&self) -> &'static str {
        use CheckKind::*;
        match self {
            QloAxioms => "qlo-axioms",
            TranslatedJoins => "translated-joins",
            Fesspe => "fesspe",
            ChiFormula => "chi-formula",
            NicaCovariance => "nica-covariance",
            MonomialOracle => "monomial-oracle",
            FourCaseCommutation => "four-case-commutation",
            SumToIdentity => "sum-to-identity",
            RankOneSystem => "rank-one-system",
            IdealClosure => "ideal-closure",
            PartitionConverse => "partition-converse",
            CommutantDimension => "commutant-dimension",
            TruncationOracle => "truncation-oracle",
            SpectrumCensus => "spectrum-census",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::all().into_iter().find(|c| c.name() == name)
    }

    /// Checks that only make sense once a candidate set has passed the
    /// exhaustivity check.
    pub fn needs_candidate(&self) -> bool {
        use CheckKind::*;
        matches!(
            self,
            ChiFormula | FourCaseCommutation | SumToIdentity | RankOneSystem | IdealClosure
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
    /// Reported for inspection without a pass/fail assertion.
    Flagged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

pub type Witness = BTreeMap<String, String>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub parameters: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub mode: Mode,
    pub cases: u64,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: CheckKind, instance: String) -> CheckReport {
        CheckReport {
            check: check.name().to_string(),
            instance,
            parameters: BTreeMap::new(),
            verdict: Verdict::Pass,
            mode: Mode::Exhaustive,
            cases: 0,
            witnesses: vec![],
            notes: vec![],
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> CheckReport {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> CheckReport {
        self.verdict = Verdict::Skipped;
        self.notes.push(reason.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub instance: InstanceConfig,
    pub seed: u64,
    pub verdict: Verdict,
    pub checks: Vec<CheckReport>,
}

impl RunReport {
    pub fn new(instance: InstanceConfig, seed: u64, checks: Vec<CheckReport>) -> RunReport {
        let verdict = if checks.iter().any(CheckReport::failed) {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        RunReport {
            tool: "qlo-toeplitz".to_string(),
            instance,
            seed,
            verdict,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// One line per check, plus the overall verdict.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Skipped => "SKIP",
                Verdict::Flagged => "FLAG",
            };
            let mode = match c.mode {
                Mode::Exhaustive => "exhaustive",
                Mode::Sampled => "sampled",
            };
            let params: Vec<String> = c
                .parameters
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            out.push_str(&format!(
                "{tag} {:<22} cases={:<9} ({mode}) {}\n",
                c.check,
                c.cases,
                params.join(" ")
            ));
            for note in &c.notes {
                out.push_str(&format!("     note: {note}\n"));
            }
            for w in &c.witnesses {
                let parts: Vec<String> = w.iter().map(|(k, v)| format!("{k}={v}")).collect();
                out.push_str(&format!("     witness: {}\n", parts.join(" ")));
            }
        }
        out.push_str(&format!(
            "overall: {} on {}\n",
            match self.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                _ => "PASS",
            },
            self.instance.kind,
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for c in CheckKind::all() {
            assert_eq!(CheckKind::from_name(c.name()), Some(c));
        }
        assert_eq!(CheckKind::from_name("nope"), None);
    }

    #[test]
    fn overall_verdict_follows_failures() {
        let instance = InstanceConfig {
            kind: "divisibility".into(),
            rank: None,
            denominator_bound: None,
        };
        let mut check = CheckReport::new(CheckKind::Fesspe, "divisibility".into());
        check.verdict = Verdict::Fail;
        let report = RunReport::new(instance.clone(), 0, vec![check]);
        assert!(!report.passed());
        let report = RunReport::new(
            instance,
            0,
            vec![CheckReport::new(CheckKind::Fesspe, "divisibility".into()).skipped("x")],
        );
        assert!(report.passed());
    }

    #[test]
    fn json_is_stable() {
        let instance = InstanceConfig {
            kind: "free_monoid".into(),
            rank: Some(2),
            denominator_bound: None,
        };
        let report = RunReport::new(instance, 7, vec![]);
        assert_eq!(report.to_json(), report.clone().to_json());
        assert!(report.to_json().contains("\"seed\": 7"));
    }
}
