//! Bernoulli naive Bayes with add-one smoothing.
//!
//! A feature is "present" when its value is positive. The class score is
//! `log P(C) + Σ log P(x_j present | C)` over the features present in the
//! instance; features never seen in training carry no evidence.

use serde::{Deserialize, Serialize};

use super::Label;
use crate::error::{Error, Result};
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel<L> {
    /// Sorted class labels.
    classes: Vec<L>,
    log_priors: Vec<f64>,
    /// `log_present[c][j] = log P(x_j > 0 | class c)`.
    log_present: Vec<Vec<f64>>,
    /// `log_absent[c][j] = log P(x_j = 0 | class c)`.
    log_absent: Vec<Vec<f64>>,
    /// `log P(x_j present | class c)` for a feature never seen in training.
    log_unseen: Vec<f64>,
}

pub fn nb_train<L: Label>(xs: &[SparseVec], ys: &[L]) -> Result<NaiveBayesModel<L>> {
    if xs.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if xs.len() != ys.len() {
        return Err(Error::config("instances and labels differ in length"));
    }
    let mut classes: Vec<L> = ys.to_vec();
    classes.sort();
    classes.dedup();
    let dim = xs.iter().map(SparseVec::dim).max().unwrap_or(0);

    let mut totals = vec![0usize; classes.len()];
    let mut present = vec![vec![0usize; dim]; classes.len()];
    for (x, y) in xs.iter().zip(ys) {
        let c = classes.binary_search(y).expect("label collected above");
        totals[c] += 1;
        for (j, v) in x.iter() {
            if v > 0.0 {
                present[c][j as usize] += 1;
            }
        }
    }

    let m = xs.len() as f64;
    let log_priors = totals.iter().map(|&n| (n as f64 / m).ln()).collect();
    let mut log_present = Vec::with_capacity(classes.len());
    let mut log_absent = Vec::with_capacity(classes.len());
    for (c, counts) in present.iter().enumerate() {
        let denom = totals[c] as f64 + 2.0;
        log_present.push(counts.iter().map(|&k| ((k as f64 + 1.0) / denom).ln()).collect());
        log_absent.push(
            counts
                .iter()
                .map(|&k| ((totals[c] - k) as f64 + 1.0) / denom)
                .map(f64::ln)
                .collect(),
        );
    }
    let log_unseen = totals.iter().map(|&n| (1.0 / (n as f64 + 2.0)).ln()).collect();
    Ok(NaiveBayesModel { classes, log_priors, log_present, log_absent, log_unseen })
}

impl<L: Label> NaiveBayesModel<L> {
    pub fn classes(&self) -> &[L] {
        &self.classes
    }

    pub fn prior(&self, class: &L) -> Option<f64> {
        let c = self.classes.binary_search(class).ok()?;
        Some(self.log_priors[c].exp())
    }

    /// `P(x_j present | class)`.
    pub fn likelihood(&self, class: &L, feature: u32) -> Option<f64> {
        let c = self.classes.binary_search(class).ok()?;
        Some(self.log_present[c].get(feature as usize).copied().unwrap_or(self.log_unseen[c]).exp())
    }

    /// `P(x_j absent | class)`.
    pub fn absent_likelihood(&self, class: &L, feature: u32) -> Option<f64> {
        let c = self.classes.binary_search(class).ok()?;
        let unseen = 1.0 - self.log_unseen[c].exp();
        Some(self.log_absent[c].get(feature as usize).map_or(unseen, |l| l.exp()))
    }

    /// Unnormalized log posterior of every class, in class order.
    pub fn log_scores(&self, x: &SparseVec) -> Vec<f64> {
        (0..self.classes.len())
            .map(|c| {
                let evidence: f64 = x
                    .iter()
                    .filter(|&(_, v)| v > 0.0)
                    .map(|(j, _)| self.log_present[c].get(j as usize).copied().unwrap_or(self.log_unseen[c]))
                    .sum();
                self.log_priors[c] + evidence
            })
            .collect()
    }

    /// Highest-scoring class with its log score; ties go to the smallest
    /// label.
    pub fn classify(&self, x: &SparseVec) -> (L, f64) {
        let scores = self.log_scores(x);
        let mut best = 0;
        for c in 1..scores.len() {
            if scores[c] > scores[best] {
                best = c;
            }
        }
        (self.classes[best].clone(), scores[best])
    }

    /// `log P(class | x) - log P(rest | x)` for a binary model; positive
    /// exactly when `class` would be predicted.
    pub fn log_odds(&self, x: &SparseVec, class: &L) -> f64 {
        let scores = self.log_scores(x);
        let Ok(c) = self.classes.binary_search(class) else {
            return f64::NEG_INFINITY;
        };
        let best_other = scores
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != c)
            .map(|(_, &s)| s)
            .fold(f64::NEG_INFINITY, f64::max);
        let gap = scores[c] - best_other;
        // a tie is only a win for the smaller label
        let wins_ties = self.classes.iter().position(|l| l == class) == Some(0);
        if gap == 0.0 && !wins_ties {
            -0.0
        } else {
            gap
        }
    }
}
