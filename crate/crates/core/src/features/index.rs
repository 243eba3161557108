use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{FeatureKey, FeatureVector};
use crate::sparse::SparseVec;

/// Dense column ids for the keys seen in training, assigned in sorted key
/// order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<FeatureKey>", into = "Vec<FeatureKey>")]
pub struct FeatureIndex {
    keys: Vec<FeatureKey>,
    columns: HashMap<FeatureKey, u32>,
}

pub fn build_index<'a>(vectors: impl IntoIterator<Item = &'a FeatureVector>) -> FeatureIndex {
    let keys: BTreeSet<&FeatureKey> = vectors.into_iter().flat_map(|v| v.keys()).collect();
    FeatureIndex::from(keys.into_iter().cloned().collect::<Vec<_>>())
}

impl FeatureIndex {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn column(&self, key: &FeatureKey) -> Option<u32> {
        self.columns.get(key).copied()
    }

    pub fn key(&self, column: u32) -> Option<&FeatureKey> {
        self.keys.get(column as usize)
    }

    pub fn keys(&self) -> &[FeatureKey] {
        &self.keys
    }

    /// Maps a feature vector onto the index; keys never seen in training
    /// are dropped.
    pub fn vectorize(&self, fv: &FeatureVector) -> SparseVec {
        SparseVec::from_pairs(
            fv.iter()
                .filter_map(|(k, v)| self.column(k).map(|c| (c, v)))
                .collect(),
        )
    }
}

impl From<Vec<FeatureKey>> for FeatureIndex {
    fn from(mut keys: Vec<FeatureKey>) -> Self {
        keys.sort();
        keys.dedup();
        let columns = keys
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i as u32))
            .collect();
        FeatureIndex { keys, columns }
    }
}

impl From<FeatureIndex> for Vec<FeatureKey> {
    fn from(index: FeatureIndex) -> Self {
        index.keys
    }
}
