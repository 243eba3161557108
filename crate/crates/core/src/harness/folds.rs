use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Document indices per fold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub seed: u64,
    pub folds: Vec<Vec<usize>>,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.folds.len()
    }

    /// Indices outside fold `f`, ascending.
    pub fn train_indices(&self, f: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .flat_map(|(_, docs)| docs.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// Shuffles `n_docs` document indices with a seeded generator and deals
/// them round-robin into `k` folds.
pub fn make_folds(n_docs: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::config(format!("cross-validation needs at least 2 folds, got {k}")));
    }
    if k > n_docs {
        return Err(Error::config(format!("{k} folds requested but the corpus has only {n_docs} documents")));
    }
    let mut order: Vec<usize> = (0..n_docs).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = vec![Vec::new(); k];
    for (pos, doc) in order.into_iter().enumerate() {
        folds[pos % k].push(doc);
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(FoldPlan { seed, folds })
}
