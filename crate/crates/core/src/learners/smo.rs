//! Sequential minimal optimization for the soft-margin SVM dual, with
//! second-order working-set selection and an LRU kernel row cache.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_binary, KernelSpec};
use crate::error::{Error, Result};
use crate::sparse::SparseVec;

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SmoParams {
    pub c: f64,
    pub kernel: KernelSpec,
    /// Stopping tolerance on the maximal KKT violation.
    pub tolerance: f64,
    /// Kernel row cache budget in megabytes.
    pub cache_mb: usize,
}

impl Default for SmoParams {
    fn default() -> Self {
        SmoParams { c: 0.7, kernel: KernelSpec::default(), tolerance: 1e-3, cache_mb: 100 }
    }
}

/// Dual solution: `f(x) = Σ α_i y_i K(x_i, x) + bias`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit first.
    pub converged: bool,
}

/// Rows of `Q_ij = y_i y_j K(x_i, x_j)`, least recently used evicted first.
struct RowCache<'a> {
    xs: &'a [SparseVec],
    ys: &'a [i8],
    kernel: KernelSpec,
    capacity: usize,
    rows: HashMap<usize, (Arc<Vec<f64>>, u64)>,
    order: BTreeMap<u64, usize>,
    clock: u64,
    scratch: Vec<f64>,
}

impl<'a> RowCache<'a> {
    fn new(xs: &'a [SparseVec], ys: &'a [i8], kernel: KernelSpec, cache_mb: usize) -> Self {
        let row_bytes = (xs.len() * std::mem::size_of::<f64>()).max(1);
        let capacity = (cache_mb * (1 << 20) / row_bytes).max(2);
        let dim = xs.iter().map(SparseVec::dim).max().unwrap_or(0);
        RowCache {
            xs,
            ys,
            kernel,
            capacity,
            rows: HashMap::new(),
            order: BTreeMap::new(),
            clock: 0,
            scratch: vec![0.0; dim],
        }
    }

    fn row(&mut self, i: usize) -> Arc<Vec<f64>> {
        self.clock += 1;
        if let Some((row, stamp)) = self.rows.get_mut(&i) {
            self.order.remove(stamp);
            *stamp = self.clock;
            self.order.insert(self.clock, i);
            return Arc::clone(row);
        }
        if self.rows.len() >= self.capacity {
            if let Some((_, victim)) = self.order.pop_first() {
                self.rows.remove(&victim);
            }
        }
        let xi = &self.xs[i];
        for (j, v) in xi.iter() {
            self.scratch[j as usize] = v;
        }
        let yi = f64::from(self.ys[i]);
        let row: Vec<f64> = self
            .xs
            .iter()
            .zip(self.ys)
            .map(|(xj, &yj)| yi * f64::from(yj) * self.kernel.from_dot(xj.dot_dense(&self.scratch)))
            .collect();
        for (j, _) in xi.iter() {
            self.scratch[j as usize] = 0.0;
        }
        let row = Arc::new(row);
        self.rows.insert(i, (Arc::clone(&row), self.clock));
        self.order.insert(self.clock, i);
        row
    }
}

pub fn smo_train(xs: &[SparseVec], ys: &[i8], params: &SmoParams) -> Result<DualSolution> {
    if xs.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    check_binary(xs.len(), ys)?;
    if ys.iter().all(|&y| y == ys[0]) {
        return Err(Error::SingleClass("SVM training needs both positive and negative instances"));
    }
    if !(params.c > 0.0) {
        return Err(Error::config("svm C must be positive"));
    }
    let n = xs.len();
    let c = params.c;
    let y: Vec<f64> = ys.iter().map(|&v| f64::from(v)).collect();
    let qd: Vec<f64> = xs.iter().map(|x| params.kernel.eval(x, x)).collect();
    let mut cache = RowCache::new(xs, ys, params.kernel, params.cache_mb);
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let max_iter = 10_000_000usize.max(100 * n);
    let upper = |a: f64| a >= c;
    let lower = |a: f64| a <= 0.0;

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        // i: maximal violating index, j: best second-order partner
        let mut gmax = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            if y[t] > 0.0 {
                if !upper(alpha[t]) && -grad[t] >= gmax {
                    gmax = -grad[t];
                    i = t;
                }
            } else if !lower(alpha[t]) && grad[t] >= gmax {
                gmax = grad[t];
                i = t;
            }
        }
        if i == usize::MAX {
            converged = true;
            break;
        }
        let qi = cache.row(i);
        let mut gmax2 = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut obj_min = f64::INFINITY;
        for t in 0..n {
            let (grad_diff, quad) = if y[t] > 0.0 {
                if lower(alpha[t]) {
                    continue;
                }
                gmax2 = gmax2.max(grad[t]);
                (gmax + grad[t], qd[i] + qd[t] - 2.0 * y[i] * qi[t])
            } else {
                if upper(alpha[t]) {
                    continue;
                }
                gmax2 = gmax2.max(-grad[t]);
                (gmax - grad[t], qd[i] + qd[t] + 2.0 * y[i] * qi[t])
            };
            if grad_diff > 0.0 {
                let obj = -(grad_diff * grad_diff) / if quad > 0.0 { quad } else { TAU };
                if obj <= obj_min {
                    j = t;
                    obj_min = obj;
                }
            }
        }
        if gmax + gmax2 < params.tolerance || j == usize::MAX {
            converged = true;
            break;
        }
        iterations += 1;
        let qj = cache.row(j);

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let (mut ai, mut aj) = (old_i, old_j);
        if y[i] != y[j] {
            let quad = (qd[i] + qd[j] + 2.0 * qi[j]).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let quad = (qd[i] + qd[j] - 2.0 * qi[j]).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        alpha[i] = ai;
        alpha[j] = aj;
        let (di, dj) = (ai - old_i, aj - old_j);
        for t in 0..n {
            grad[t] += qi[t] * di + qj[t] * dj;
        }
    }
    if !converged {
        log::warn!("SMO stopped after {iterations} iterations without reaching tolerance {}", params.tolerance);
    }

    // threshold from free vectors, else the midpoint of the feasible range
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if upper(alpha[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 { sum_free / n_free as f64 } else { (ub + lb) / 2.0 };
    Ok(DualSolution { alpha, bias: -rho, iterations, converged })
}
