use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{RelationInstance, RelationType};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Counts {
    pub fn add(&mut self, other: Counts) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    pub fn gold(&self) -> usize {
        self.tp + self.fn_
    }

    pub fn response(&self) -> usize {
        self.tp + self.fp
    }

    pub fn is_empty(&self) -> bool {
        self.gold() == 0 && self.response() == 0
    }
}

/// Match counts per relation type.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchCounts(BTreeMap<RelationType, Counts>);

impl MatchCounts {
    pub fn get(&self, rtype: RelationType) -> Counts {
        self.0.get(&rtype).copied().unwrap_or_default()
    }

    pub fn add(&mut self, other: &MatchCounts) {
        for (&t, &c) in &other.0 {
            self.0.entry(t).or_default().add(c);
        }
    }

    /// Counts pooled over all types.
    pub fn total(&self) -> Counts {
        let mut out = Counts::default();
        for c in self.0.values() {
            out.add(*c);
        }
        out
    }
}

/// Exact matching on (type, arg1, arg2) within one document; duplicates
/// count once.
pub fn match_relations(response: &[RelationInstance], key: &[RelationInstance]) -> MatchCounts {
    let response: BTreeSet<&RelationInstance> = response.iter().filter(|r| r.rtype != RelationType::Null).collect();
    let key: BTreeSet<&RelationInstance> = key.iter().filter(|r| r.rtype != RelationType::Null).collect();
    let mut out = MatchCounts::default();
    for r in &response {
        let c = out.0.entry(r.rtype).or_default();
        if key.contains(r) {
            c.tp += 1;
        } else {
            c.fp += 1;
        }
    }
    for k in key.difference(&response) {
        out.0.entry(k.rtype).or_default().fn_ += 1;
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1; an empty denominator gives 0.
pub fn prf(c: Counts) -> Metrics {
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    Metrics { precision, recall, f1 }
}

/// Mean of each metric independently; `None` for an empty list.
pub fn macro_average(per_fold: &[Metrics]) -> Option<Metrics> {
    if per_fold.is_empty() {
        return None;
    }
    let n = per_fold.len() as f64;
    let mean = |f: fn(&Metrics) -> f64| per_fold.iter().map(f).sum::<f64>() / n;
    Some(Metrics { precision: mean(|m| m.precision), recall: mean(|m| m.recall), f1: mean(|m| m.f1) })
}
