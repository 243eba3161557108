//! Distance-weighted k-nearest-neighbour voting.

use serde::{Deserialize, Serialize};

use super::Label;
use crate::error::{Error, Result};
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel<L> {
    k: usize,
    xs: Vec<SparseVec>,
    ys: Vec<L>,
}

impl<L: Label> KnnModel<L> {
    pub fn train(xs: Vec<SparseVec>, ys: Vec<L>, params: &KnnParams) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        if xs.len() != ys.len() {
            return Err(Error::config("instances and labels differ in length"));
        }
        if params.k == 0 {
            return Err(Error::config("knn k must be >= 1"));
        }
        Ok(KnnModel { k: params.k, xs, ys })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Vote total per label, sorted by label. The k nearest instances vote,
    /// plus any tied with the k-th; an exact match restricts the vote to
    /// exact matches with one vote each, otherwise votes weigh `1/d²`.
    pub fn votes(&self, x: &SparseVec) -> Vec<(L, f64)> {
        let mut dists: Vec<(f64, usize)> = self.xs.iter().map(|t| t.dist_sq(x)).zip(0..).collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0));
        let kth = dists[self.k.min(dists.len()) - 1].0;
        let nearest = dists.iter().take_while(|(d, _)| *d <= kth);

        let mut tally: Vec<(L, f64)> = Vec::new();
        let mut add = |label: &L, w: f64| match tally.binary_search_by(|(l, _)| l.cmp(label)) {
            Ok(i) => tally[i].1 += w,
            Err(i) => tally.insert(i, (label.clone(), w)),
        };
        if dists[0].0 == 0.0 {
            for &(_, i) in nearest.take_while(|(d, _)| *d == 0.0) {
                add(&self.ys[i], 1.0);
            }
        } else {
            for &(d, i) in nearest {
                add(&self.ys[i], 1.0 / d);
            }
        }
        tally
    }

    /// Winning label and its share of the total vote.
    pub fn classify_with_share(&self, x: &SparseVec) -> (L, f64) {
        let mut votes = self.votes(x);
        let total: f64 = votes.iter().map(|v| v.1).sum();
        let mut best = 0;
        for i in 1..votes.len() {
            if votes[i].1 > votes[best].1 {
                best = i;
            }
        }
        let (label, w) = votes.swap_remove(best);
        (label, w / total)
    }

    pub fn classify(&self, x: &SparseVec) -> L {
        self.classify_with_share(x).0
    }

    /// Share of the vote going to `label`.
    pub fn share(&self, x: &SparseVec, label: &L) -> f64 {
        let votes = self.votes(x);
        let total: f64 = votes.iter().map(|v| v.1).sum();
        votes.iter().find(|(l, _)| l == label).map_or(0.0, |(_, w)| w / total)
    }
}
