use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Counterexample,
}

/// Outcome of checking one statement on one instance.
///
/// `verdict` is `COUNTEREXAMPLE` exactly when every hypothesis held and the
/// claimed implication between the assertions failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub hypotheses: BTreeMap<String, bool>,
    pub assertions: BTreeMap<String, bool>,
    pub verdict: Verdict,
    pub witness: Option<Value>,
}

impl TheoremReport {
    pub fn new(theorem: &str) -> Self {
        TheoremReport {
            theorem: theorem.to_string(),
            hypotheses: BTreeMap::new(),
            assertions: BTreeMap::new(),
            verdict: Verdict::Consistent,
            witness: None,
        }
    }

    pub fn hyp(mut self, name: &str, held: bool) -> Self {
        self.hypotheses.insert(name.to_string(), held);
        self
    }

    pub fn assert(mut self, name: &str, value: bool) -> Self {
        self.assertions.insert(name.to_string(), value);
        self
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.values().all(|&h| h)
    }

    pub fn get(&self, assertion: &str) -> bool {
        self.assertions.get(assertion).copied().unwrap_or(false)
    }

    /// Sets the verdict from whether the claim held.
    pub fn conclude(mut self, claim_holds: bool) -> Self {
        self.verdict = if self.hypotheses_hold() && !claim_holds {
            Verdict::Counterexample
        } else {
            Verdict::Consistent
        };
        self
    }

    /// Claim: all listed assertions are equal.
    pub fn conclude_equivalent(self, names: &[&str]) -> Self {
        let first = self.get(names[0]);
        let ok = names.iter().all(|n| self.get(n) == first);
        self.conclude(ok)
    }

    /// Claim: every assertion is true.
    pub fn conclude_all(self) -> Self {
        let ok = self.assertions.values().all(|&a| a);
        self.conclude(ok)
    }

    pub fn is_consistent(&self) -> bool {
        self.verdict == Verdict::Consistent
    }
}
