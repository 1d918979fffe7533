//! Verifiers for the decompositions of Sym_K(L) into families of twisted
//! trace forms and for the constant-rank refinements of those families.
//!
//! Every verifier builds the pieces explicitly, audits the direct sum with
//! exact echelon arithmetic and enumerates rank histograms, then packages
//! claimed against observed values into a [`Certificate`].

mod theorem_c;
mod verify;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::Value;

pub use theorem_c::{refine_a1_pow4, theorem_c_case, TheoremCCase, TheoremCParams};
pub use verify::{
    inverse_pair_count, min_rank_lower_bound, refine_a1_2k, refine_ai_mod2, verify_full_refined,
    verify_global, verify_rank_laws,
};

use crate::ffield::FieldTower;
use crate::formspace::{EnumerationMode, RankProfile, Twist};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    OutsideHypotheses,
}

/// The tower a certificate was computed for, plus theorem-specific parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub p: u32,
    pub s: u32,
    pub n: usize,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl Instance {
    pub fn of(tower: &FieldTower) -> Self {
        let f = tower.base();
        Instance { p: f.p(), s: f.s(), n: tower.degree(), extra: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }
}

/// One piece of a decomposition: what is claimed about it and what was seen.
///
/// `claimed_ranks` is the set of ranks nonzero members may have;
/// `required_ranks` must all occur, and `claimed_histogram` must match
/// exactly. The last two are only checked on exhaustive profiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub i: Twist,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_dim: Option<usize>,
    pub observed_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_ranks: Option<BTreeSet<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub required_ranks: Option<BTreeSet<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claimed_histogram: Option<BTreeMap<usize, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_profile: Option<RankProfile>,
    pub ok: bool,
}

impl Claim {
    pub fn new(name: impl Into<String>, i: Twist, observed_dim: usize) -> Self {
        Claim {
            name: name.into(),
            i,
            claimed_dim: None,
            observed_dim,
            claimed_ranks: None,
            required_ranks: None,
            claimed_histogram: None,
            rank_profile: None,
            ok: false,
        }
    }

    pub fn with_dim(mut self, d: usize) -> Self {
        self.claimed_dim = Some(d);
        self
    }

    pub fn with_ranks(mut self, ranks: impl IntoIterator<Item = usize>) -> Self {
        self.claimed_ranks = Some(ranks.into_iter().collect());
        self
    }

    pub fn with_required(mut self, ranks: impl IntoIterator<Item = usize>) -> Self {
        self.required_ranks = Some(ranks.into_iter().collect());
        self
    }

    pub fn with_histogram(mut self, h: BTreeMap<usize, u64>) -> Self {
        self.claimed_histogram = Some(h);
        self
    }

    pub fn with_profile(mut self, p: RankProfile) -> Self {
        self.rank_profile = Some(p);
        self
    }

    /// Fill in `ok` from the claimed and observed data.
    pub fn settle(mut self) -> Self {
        self.ok = self.evaluate();
        self
    }

    pub fn evaluate(&self) -> bool {
        if self.claimed_dim.is_some_and(|d| d != self.observed_dim) {
            return false;
        }
        let Some(prof) = &self.rank_profile else {
            return self.claimed_ranks.is_none()
                && self.required_ranks.is_none()
                && self.claimed_histogram.is_none();
        };
        if let Some(allowed) = &self.claimed_ranks {
            if !prof.histogram.keys().all(|r| allowed.contains(r)) {
                return false;
            }
        }
        if prof.mode.is_exhaustive() {
            if let Some(req) = &self.required_ranks {
                if !req.iter().all(|r| prof.histogram.contains_key(r)) {
                    return false;
                }
            }
            if let Some(h) = &self.claimed_histogram {
                if *h != prof.histogram {
                    return false;
                }
            }
        }
        true
    }
}

/// A verdict for one theorem instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub theorem_id: String,
    pub instance: Instance,
    pub claims: Vec<Claim>,
    /// Auxiliary identities checked along the way (e.g. a norm value).
    pub checks: BTreeMap<String, bool>,
    pub direct_sum_ok: bool,
    pub verdict: Verdict,
    pub enumeration: EnumerationMode,
}

impl Certificate {
    /// Assemble a certificate; the verdict is `pass` iff every claim, every
    /// check and the direct-sum audit hold, unless the instance is outside
    /// the theorem's hypotheses.
    pub fn conclude(
        theorem_id: &str,
        instance: Instance,
        claims: Vec<Claim>,
        checks: BTreeMap<String, bool>,
        direct_sum_ok: bool,
        outside: bool,
    ) -> Self {
        let verdict = if outside {
            Verdict::OutsideHypotheses
        } else if direct_sum_ok && claims.iter().all(|c| c.ok) && checks.values().all(|&b| b) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        let enumeration = claims
            .iter()
            .filter_map(|c| c.rank_profile.as_ref())
            .map(|p| p.mode)
            .find(|m| !m.is_exhaustive())
            .unwrap_or(EnumerationMode::Exhaustive);
        Certificate {
            theorem_id: theorem_id.to_string(),
            instance,
            claims,
            checks,
            direct_sum_ok,
            verdict,
            enumeration,
        }
    }

    /// Certificate for an instance that does not meet the hypotheses at all.
    pub fn outside(theorem_id: &str, instance: Instance) -> Self {
        Certificate::conclude(theorem_id, instance, Vec::new(), BTreeMap::new(), true, true)
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }

    /// Pretty JSON with keys sorted at every level, newline-terminated.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("certificates always serialize");
        let mut out = serde_json::to_string_pretty(&value).expect("values always serialize");
        out.push('\n');
        out
    }
}
