//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Version of the JSON layout; matches `schemas/report.v1.schema.json`.
pub const SCHEMA_VERSION: &str = "1";

/// Anchor strings naming the result each check certifies.
pub mod anchors {
    pub const SUQ2_RELATIONS: &str = "§3 C(SU_q(2)) relations";
    pub const REGULAR_REP: &str = "§3 regular representation";
    pub const PODLES_RELATIONS: &str = "§3 Podleś relations";
    pub const PODLES_EXPANSIONS: &str = "§3 Podleś expansions";
    pub const HAAR_STATE: &str = "§2 Haar state";
    pub const FREDHOLM_MODULE: &str = "Prop 4.1";
    pub const LEMMA_4_2: &str = "Lemma 4.2";
    pub const LEMMA_4_3: &str = "Lemma 4.3";
    pub const LEMMA_4_4: &str = "Lemma 4.4";
    pub const THEOREM_4_5_INDEX: &str = "Theorem 4.5 index";
    pub const THEOREM_4_5_ROTATION: &str = "Theorem 4.5 rotation homotopy";
    pub const THEOREM_4_5_DEGENERATE: &str = "Theorem 4.5 degenerate modules";
    pub const KOSZUL: &str = "§8 Koszul complex";
    pub const THEOREM_8_1: &str = "Theorem 8.1";
    pub const FUSION: &str = "§8 fusion rule";
    pub const THEOREM_7_5: &str = "Theorem 7.5";
}

/// One computed check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub paper_anchor: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threshold: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    /// A residual that passes iff it is finite and below `threshold`.
    pub fn residual(name: impl Into<String>, anchor: &str, residual: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            paper_anchor: anchor.to_string(),
            max_residual: Some(residual),
            value: None,
            threshold: Some(threshold),
            pass: residual.is_finite() && residual < threshold,
            note: None,
        }
    }

    /// A measured value with an explicit verdict.
    pub fn value(name: impl Into<String>, anchor: &str, value: impl Into<Value>, pass: bool) -> Self {
        Check {
            name: name.into(),
            paper_anchor: anchor.to_string(),
            max_residual: None,
            value: Some(value.into()),
            threshold: None,
            pass,
            note: None,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The outcome of one suite run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub suite: String,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub assumptions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub data: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub overall: Verdict,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION.to_string(),
            suite: suite.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            assumptions: Vec::new(),
            data: None,
            seed: None,
            overall: Verdict::Fail,
            wall_time_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self.overall = self.verdict();
        self
    }

    pub fn assume(&mut self, fact: impl Into<String>) -> &mut Self {
        self.assumptions.push(fact.into());
        self
    }

    /// Appends the checks and assumptions of `other`, prefixing check names.
    pub fn absorb(&mut self, other: VerificationReport) -> &mut Self {
        for mut c in other.checks {
            c.name = format!("{}: {}", other.suite, c.name);
            self.checks.push(c);
        }
        for a in other.assumptions {
            if !self.assumptions.contains(&a) {
                self.assumptions.push(a);
            }
        }
        self.overall = self.verdict();
        self
    }

    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn verdict(&self) -> Verdict {
        if !self.checks.is_empty() && self.checks.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Pretty JSON; refuses reports without checks.
    pub fn to_json(&self) -> Result<String> {
        if self.checks.is_empty() {
            return Err(Error::Report(format!("suite '{}' registered no checks", self.suite)));
        }
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let s = self.to_json()?;
        std::fs::write(path, s)?;
        Ok(())
    }
}

/// One row of a decay table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub l: String,
    pub family: String,
    pub sup_residual: f64,
}

/// CSV with columns `l,family,sup_residual`.
pub fn decay_csv(rows: &[DecayRow]) -> String {
    let mut out = String::from("l,family,sup_residual\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:e}", r.l, r.family, r.sup_residual);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_is_conjunction() {
        let mut r = VerificationReport::new("demo");
        assert!(!r.passed());
        r.push(Check::residual("a", anchors::LEMMA_4_2, 1e-14, 1e-10));
        assert!(r.passed());
        r.push(Check::residual("b", anchors::LEMMA_4_2, f64::NAN, 1e-10));
        assert!(!r.passed());
    }

    #[test]
    fn empty_reports_are_refused() {
        assert!(matches!(VerificationReport::new("x").to_json(), Err(Error::Report(_))));
    }

    #[test]
    fn csv_layout() {
        let rows = vec![DecayRow { l: "10".into(), family: "a0".into(), sup_residual: 0.5 }];
        assert_eq!(decay_csv(&rows), "l,family,sup_residual\n10,a0,5e-1\n");
    }
}
