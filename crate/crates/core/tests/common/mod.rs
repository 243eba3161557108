//! Reference implementations used as test oracles. Written from the
//! textbook formulas, sharing no code with the library.

#![allow(dead_code)]

use std::cmp::Ordering;

/// Naive Bayes winner by exact rational comparison of
/// `P(c) * prod_{j present in x} (k_cj + 1) / (n_c + 2)`.
/// `None` when the top two classes tie exactly.
pub fn nb_oracle(rows: &[Vec<u8>], ys: &[u8], x: &[u8]) -> Option<u8> {
    let mut classes: Vec<u8> = ys.to_vec();
    classes.sort_unstable();
    classes.dedup();
    // score_c = n_c * prod (k+1) / (n_c+2)^p, common factor 1/m dropped
    let present: Vec<usize> = (0..x.len()).filter(|&j| x[j] != 0).collect();
    let scores: Vec<(u128, u128)> = classes
        .iter()
        .map(|&c| {
            let members: Vec<&Vec<u8>> = rows.iter().zip(ys).filter(|(_, &y)| y == c).map(|(r, _)| r).collect();
            let n = members.len() as u128;
            let mut num = n;
            let mut den = 1u128;
            for &j in &present {
                let k = members.iter().filter(|r| r.get(j).copied().unwrap_or(0) != 0).count() as u128;
                num *= k + 1;
                den *= n + 2;
            }
            (num, den)
        })
        .collect();
    let cmp = |a: &(u128, u128), b: &(u128, u128)| (a.0 * b.1).cmp(&(b.0 * a.1));
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&a, &b| cmp(&scores[b], &scores[a]));
    if order.len() > 1 && cmp(&scores[order[0]], &scores[order[1]]) == Ordering::Equal {
        return None;
    }
    Some(classes[order[0]])
}

/// Distance-weighted KNN vote over integer points. The k closest points
/// and every point tied with the k-th vote with weight `1/d^2`; if any
/// point coincides with `x`, only coincident points vote, once each.
/// `None` when the two best labels are within 1e-9 relative.
pub fn knn_oracle(rows: &[Vec<i32>], ys: &[u8], x: &[i32], k: usize) -> Option<u8> {
    let d2: Vec<i64> = rows
        .iter()
        .map(|r| r.iter().zip(x).map(|(a, b)| i64::from(a - b).pow(2)).sum())
        .collect();
    let mut sorted = d2.clone();
    sorted.sort_unstable();
    let kth = sorted[k.min(sorted.len()) - 1];
    let exact = sorted[0] == 0;
    let mut labels: Vec<u8> = ys.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let tally: Vec<f64> = labels
        .iter()
        .map(|&v| {
            (0..rows.len())
                .filter(|&i| ys[i] == v && d2[i] <= kth)
                .map(|i| {
                    if exact {
                        if d2[i] == 0 { 1.0 } else { 0.0 }
                    } else {
                        1.0 / d2[i] as f64
                    }
                })
                .sum()
        })
        .collect();
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| tally[b].total_cmp(&tally[a]));
    if order.len() > 1 && (tally[order[0]] - tally[order[1]]).abs() <= 1e-9 * tally[order[0]].abs().max(1.0) {
        return None;
    }
    Some(labels[order[0]])
}

pub fn entropy(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

fn class_counts(ys: &[u8], idx: &[usize]) -> Vec<usize> {
    let mut counts = vec![0usize; 256];
    for &i in idx {
        counts[ys[i] as usize] += 1;
    }
    counts
}

/// Gain and split information of partitioning `idx` into `parts`.
pub fn partition_scores(ys: &[u8], idx: &[usize], parts: &[Vec<usize>]) -> (f64, f64) {
    let n = idx.len() as f64;
    let mut remainder = 0.0;
    let mut split = 0.0;
    for p in parts.iter().filter(|p| !p.is_empty()) {
        let w = p.len() as f64 / n;
        remainder += w * entropy(&class_counts(ys, p));
        split -= w * w.log2();
    }
    (entropy(&class_counts(ys, idx)) - remainder, split)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RefTree {
    Leaf(u8),
    Split { attr: usize, threshold: f64, le: Box<RefTree>, gt: Box<RefTree> },
}

impl RefTree {
    pub fn classify(&self, x: &[f64]) -> u8 {
        match self {
            RefTree::Leaf(c) => *c,
            RefTree::Split { attr, threshold, le, gt } => {
                if x[*attr] <= *threshold {
                    le.classify(x)
                } else {
                    gt.classify(x)
                }
            }
        }
    }
}

fn majority(ys: &[u8], idx: &[usize], fallback: u8) -> u8 {
    if idx.is_empty() {
        return fallback;
    }
    let counts = class_counts(ys, idx);
    let mut best = 0;
    for c in 1..counts.len() {
        if counts[c] > counts[best] {
            best = c;
        }
    }
    best as u8
}

/// Unpruned divide-and-conquer tree over continuous attributes: tries
/// every attribute and every midpoint cut, keeps cuts leaving at least
/// `min_cases` on both sides, and picks the best gain ratio among
/// attributes whose best gain reaches the average positive gain.
pub fn reference_tree(rows: &[Vec<f64>], ys: &[u8], min_cases: usize) -> RefTree {
    let idx: Vec<usize> = (0..rows.len()).collect();
    grow(rows, ys, &idx, min_cases, 0)
}

fn grow(rows: &[Vec<f64>], ys: &[u8], idx: &[usize], min_cases: usize, fallback: u8) -> RefTree {
    let maj = majority(ys, idx, fallback);
    let distinct = {
        let mut c: Vec<u8> = idx.iter().map(|&i| ys[i]).collect();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    if distinct <= 1 || idx.len() < min_cases {
        return RefTree::Leaf(maj);
    }
    let n_attr = rows[0].len();
    // best cut per attribute by gain
    let mut cands: Vec<(usize, f64, f64, f64)> = Vec::new();
    for a in 0..n_attr {
        let mut values: Vec<f64> = idx.iter().map(|&i| rows[i][a]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        let mut best: Option<(f64, f64, f64)> = None;
        for w in values.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let le: Vec<usize> = idx.iter().copied().filter(|&i| rows[i][a] <= t).collect();
            let gt: Vec<usize> = idx.iter().copied().filter(|&i| rows[i][a] > t).collect();
            if le.len() < min_cases || gt.len() < min_cases {
                continue;
            }
            let (g, s) = partition_scores(ys, idx, &[le, gt]);
            if best.map_or(true, |b| g > b.0) {
                best = Some((g, s, t));
            }
        }
        if let Some((g, s, t)) = best {
            cands.push((a, g, s, t));
        }
    }
    let positive: Vec<f64> = cands.iter().map(|c| c.1).filter(|&g| g > 0.0).collect();
    if positive.is_empty() {
        return RefTree::Leaf(maj);
    }
    let mean = positive.iter().sum::<f64>() / positive.len() as f64;
    let chosen = cands
        .iter()
        .filter(|c| c.1 > 0.0 && c.1 >= mean - 1e-12 && c.2 > 0.0)
        .fold(None::<&(usize, f64, f64, f64)>, |best, c| match best {
            Some(b) if b.1 / b.2 >= c.1 / c.2 => Some(b),
            _ => Some(c),
        });
    let Some(&(attr, _, _, threshold)) = chosen else {
        return RefTree::Leaf(maj);
    };
    let le: Vec<usize> = idx.iter().copied().filter(|&i| rows[i][attr] <= threshold).collect();
    let gt: Vec<usize> = idx.iter().copied().filter(|&i| rows[i][attr] > threshold).collect();
    RefTree::Split {
        attr,
        threshold,
        le: Box::new(grow(rows, ys, &le, min_cases, maj)),
        gt: Box::new(grow(rows, ys, &gt, min_cases, maj)),
    }
}

/// Soft-margin dual solved by cyclic sweeps over every index pair, each
/// pair optimized exactly under the box and equality constraints, until
/// the largest KKT violation drops below `eps`. Returns `(alpha, bias)`.
pub fn dual_oracle(k: &[Vec<f64>], y: &[f64], c: f64, eps: f64) -> (Vec<f64>, f64) {
    let m = y.len();
    let mut alpha = vec![0.0; m];
    for _sweep in 0..200_000 {
        for i in 0..m {
            for j in (i + 1)..m {
                let eta = k[i][i] + k[j][j] - 2.0 * k[i][j];
                if eta <= 1e-15 {
                    continue;
                }
                // errors E = f_nobias(x) - y; bias cancels in the pair step
                let (lo, hi) = if y[i] == y[j] {
                    ((alpha[i] + alpha[j] - c).max(0.0), (alpha[i] + alpha[j]).min(c))
                } else {
                    ((alpha[j] - alpha[i]).max(0.0), (c + alpha[j] - alpha[i]).min(c))
                };
                let out_i: f64 = (0..m).map(|t| alpha[t] * y[t] * k[i][t]).sum();
                let out_j: f64 = (0..m).map(|t| alpha[t] * y[t] * k[j][t]).sum();
                let e_i = out_i - y[i];
                let e_j = out_j - y[j];
                let aj = (alpha[j] + y[j] * (e_i - e_j) / eta).clamp(lo, hi);
                let ai = alpha[i] + y[i] * y[j] * (alpha[j] - aj);
                alpha[i] = ai.clamp(0.0, c);
                alpha[j] = aj;
            }
        }
        if kkt_gap(k, y, c, &alpha) < eps {
            break;
        }
    }
    (alpha.clone(), oracle_bias(k, y, c, &alpha))
}

/// Largest violation of the optimality conditions, as the gap between
/// the two index sets of the equality-constrained dual.
pub fn kkt_gap(k: &[Vec<f64>], y: &[f64], c: f64, alpha: &[f64]) -> f64 {
    let m = y.len();
    let (mut up, mut low) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..m {
        let g = 1.0 - y[i] * (0..m).map(|j| alpha[j] * y[j] * k[i][j]).sum::<f64>();
        let v = y[i] * g;
        let can_up = (y[i] > 0.0 && alpha[i] < c) || (y[i] < 0.0 && alpha[i] > 0.0);
        let can_down = (y[i] > 0.0 && alpha[i] > 0.0) || (y[i] < 0.0 && alpha[i] < c);
        if can_up {
            up = up.max(v);
        }
        if can_down {
            low = low.min(v);
        }
    }
    (up - low).max(0.0)
}

fn oracle_bias(k: &[Vec<f64>], y: &[f64], c: f64, alpha: &[f64]) -> f64 {
    let m = y.len();
    let resid = |i: usize| y[i] - (0..m).map(|j| alpha[j] * y[j] * k[i][j]).sum::<f64>();
    let tol = 1e-9 * c.max(1.0);
    let free: Vec<f64> = (0..m).filter(|&i| alpha[i] > tol && alpha[i] < c - tol).map(resid).collect();
    if !free.is_empty() {
        return free.iter().sum::<f64>() / free.len() as f64;
    }
    // no free vector: midpoint of the interval the KKT conditions allow
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..m {
        let r = resid(i);
        let at_zero = alpha[i] <= tol;
        // at zero: y_i f >= 1; at C: y_i f <= 1
        let lower_bound = (at_zero && y[i] > 0.0) || (!at_zero && y[i] < 0.0);
        if lower_bound {
            lo = lo.max(r);
        } else {
            hi = hi.min(r);
        }
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo + hi) / 2.0,
        (true, false) => lo,
        (false, true) => hi,
        _ => 0.0,
    }
}
