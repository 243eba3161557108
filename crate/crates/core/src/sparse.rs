use serde::{Deserialize, Serialize};

/// Sparse vector with strictly increasing column indices.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVec {
    indices: Vec<u32>,
    values: Vec<f64>,
}

impl SparseVec {
    /// Builds from unsorted entries; duplicate columns are summed and
    /// zeros dropped.
    pub fn from_pairs(mut entries: Vec<(u32, f64)>) -> Self {
        entries.sort_by_key(|&(i, _)| i);
        let mut indices: Vec<u32> = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        for (i, v) in entries {
            if indices.last() == Some(&i) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(i);
                values.push(v);
            }
        }
        let mut out = SparseVec::default();
        for (i, v) in indices.into_iter().zip(values) {
            if v != 0.0 {
                out.indices.push(i);
                out.values.push(v);
            }
        }
        out
    }

    pub fn from_dense(dense: &[f64]) -> Self {
        Self::from_pairs(
            dense
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as u32, v))
                .collect(),
        )
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn get(&self, col: u32) -> f64 {
        match self.indices.binary_search(&col) {
            Ok(k) => self.values[k],
            Err(_) => 0.0,
        }
    }

    /// One past the largest column index.
    pub fn dim(&self) -> usize {
        self.indices.last().map_or(0, |&i| i as usize + 1)
    }

    pub fn dot(&self, other: &SparseVec) -> f64 {
        let (mut a, mut b) = (0, 0);
        let mut sum = 0.0;
        while a < self.indices.len() && b < other.indices.len() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    sum += self.values[a] * other.values[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        sum
    }

    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.iter()
            .map(|(i, v)| dense.get(i as usize).map_or(0.0, |w| w * v))
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Squared Euclidean distance, summed term by term.
    pub fn dist_sq(&self, other: &SparseVec) -> f64 {
        let (mut a, mut b) = (0, 0);
        let mut sum = 0.0;
        loop {
            let d = match (self.indices.get(a), other.indices.get(b)) {
                (None, None) => break,
                (Some(_), None) => {
                    a += 1;
                    self.values[a - 1]
                }
                (None, Some(_)) => {
                    b += 1;
                    other.values[b - 1]
                }
                (Some(i), Some(j)) if i < j => {
                    a += 1;
                    self.values[a - 1]
                }
                (Some(i), Some(j)) if i > j => {
                    b += 1;
                    other.values[b - 1]
                }
                _ => {
                    a += 1;
                    b += 1;
                    self.values[a - 1] - other.values[b - 1]
                }
            };
            sum += d * d;
        }
        sum
    }

    /// `dense += scale * self`, growing `dense` as needed.
    pub fn add_to(&self, dense: &mut Vec<f64>, scale: f64) {
        if dense.len() < self.dim() {
            dense.resize(self.dim(), 0.0);
        }
        for (i, v) in self.iter() {
            dense[i as usize] += scale * v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builds_sorted_and_merged() {
        let v = SparseVec::from_pairs(vec![(3, 1.0), (1, 2.0), (3, 1.0), (5, 0.0)]);
        assert_eq!(v.indices(), &[1, 3]);
        assert_eq!(v.values(), &[2.0, 2.0]);
        assert_eq!(v.get(3), 2.0);
        assert_eq!(v.get(4), 0.0);
        assert_eq!(v.dim(), 4);
    }

    fn dense(v: &[f64]) -> SparseVec {
        SparseVec::from_dense(v)
    }

    proptest! {
        #[test]
        fn matches_dense_arithmetic(a in prop::collection::vec(-3i8..3, 6), b in prop::collection::vec(-3i8..3, 6)) {
            let fa: Vec<f64> = a.iter().map(|&x| x as f64).collect();
            let fb: Vec<f64> = b.iter().map(|&x| x as f64).collect();
            let dot: f64 = fa.iter().zip(&fb).map(|(x, y)| x * y).sum();
            let dist: f64 = fa.iter().zip(&fb).map(|(x, y)| (x - y) * (x - y)).sum();
            prop_assert_eq!(dense(&fa).dot(&dense(&fb)), dot);
            prop_assert_eq!(dense(&fa).dist_sq(&dense(&fb)), dist);
            prop_assert_eq!(dense(&fa).dot_dense(&fb), dot);
        }
    }
}
