//! C4.5 decision trees: gain-ratio splits, midpoint thresholds for
//! continuous attributes and pessimistic-error pruning.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::Label;
use crate::error::{Error, Result};
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct C45Params {
    /// Smallest number of cases a branch must hold for a split to count.
    pub min_cases: usize,
    /// Confidence level of the pessimistic error estimate.
    pub confidence: f64,
    pub prune: bool,
}

impl Default for C45Params {
    fn default() -> Self {
        C45Params { min_cases: 2, confidence: 0.25, prune: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttrKind {
    /// Split on `x <= threshold`.
    Continuous,
    /// One branch per value seen in training.
    Discrete,
}

/// Information measures of one candidate split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitScore {
    pub gain: f64,
    pub split_info: f64,
    /// `None` when the split information is zero.
    pub ratio: Option<f64>,
    /// Cut point for continuous attributes.
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        class: usize,
        /// Training cases per class reaching this leaf.
        dist: Vec<f64>,
    },
    Threshold {
        attr: u32,
        threshold: f64,
        dist: Vec<f64>,
        le: Box<Node>,
        gt: Box<Node>,
    },
    Values {
        attr: u32,
        dist: Vec<f64>,
        branches: Vec<(f64, Node)>,
    },
}

impl Node {
    fn dist(&self) -> &[f64] {
        match self {
            Node::Leaf { dist, .. } | Node::Threshold { dist, .. } | Node::Values { dist, .. } => dist,
        }
    }

    fn leaves(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Threshold { le, gt, .. } => le.leaves() + gt.leaves(),
            Node::Values { branches, .. } => branches.iter().map(|(_, n)| n.leaves()).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree<L> {
    classes: Vec<L>,
    root: Node,
}

impl<L: Label> DecisionTree<L> {
    pub fn classes(&self) -> &[L] {
        &self.classes
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaves()
    }

    fn leaf(&self, x: &SparseVec) -> (usize, &[f64]) {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { class, dist } => return (*class, dist),
                Node::Threshold { attr, threshold, le, gt, .. } => {
                    node = if x.get(*attr) <= *threshold { le } else { gt };
                }
                Node::Values { attr, dist, branches } => {
                    let v = x.get(*attr);
                    match branches.iter().find(|(b, _)| *b == v) {
                        Some((_, child)) => node = child,
                        None => return (majority(dist), dist),
                    }
                }
            }
        }
    }

    pub fn classify(&self, x: &SparseVec) -> L {
        self.classes[self.leaf(x).0].clone()
    }

    /// Share of the training cases at the reached leaf that belong to
    /// `class`. Leaves no case reached count as certain.
    pub fn class_probability(&self, x: &SparseVec, class: &L) -> f64 {
        let Ok(c) = self.classes.binary_search(class) else {
            return 0.0;
        };
        let (leaf_class, dist) = self.leaf(x);
        let total: f64 = dist.iter().sum();
        if total > 0.0 {
            dist[c] / total
        } else if leaf_class == c {
            1.0
        } else {
            0.0
        }
    }
}

fn majority(dist: &[f64]) -> usize {
    let mut best = 0;
    for c in 1..dist.len() {
        if dist[c] > dist[best] {
            best = c;
        }
    }
    best
}

fn info(dist: &[f64]) -> f64 {
    let total: f64 = dist.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    -dist
        .iter()
        .filter(|&&n| n > 0.0)
        .map(|&n| {
            let p = n / total;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Gain and split information of a partition of `parent` into `parts`.
fn score_partition(parent: &[f64], parts: &[&[f64]]) -> (f64, f64) {
    let total: f64 = parent.iter().sum();
    let mut remainder = 0.0;
    let mut split = 0.0;
    for part in parts {
        let n: f64 = part.iter().sum();
        if n > 0.0 {
            let p = n / total;
            remainder += p * info(part);
            split -= p * p.log2();
        }
    }
    // clamp rounding noise so gain stays within [0, info(T)]
    ((info(parent) - remainder).max(0.0), split)
}

/// Nonzero `(value, class)` entries of one attribute plus the class counts
/// of the cases where it is zero.
struct Column {
    entries: Vec<(f64, usize)>,
    zero: Vec<f64>,
}

struct Candidate {
    gain: f64,
    split_info: f64,
    threshold: Option<f64>,
}

impl Column {
    fn new(mut entries: Vec<(f64, usize)>, parent: &[f64]) -> Self {
        let mut zero = parent.to_vec();
        for &(_, c) in &entries {
            zero[c] -= 1.0;
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        Column { entries, zero }
    }

    /// Distinct values in increasing order with their class counts.
    fn groups(&self, k: usize) -> Vec<(f64, Vec<f64>)> {
        let mut out: Vec<(f64, Vec<f64>)> = Vec::new();
        let zero_total: f64 = self.zero.iter().sum();
        let mut zero_done = zero_total <= 0.0;
        for &(v, c) in &self.entries {
            if !zero_done && v > 0.0 {
                out.push((0.0, self.zero.clone()));
                zero_done = true;
            }
            match out.last_mut() {
                Some((last, dist)) if *last == v => dist[c] += 1.0,
                _ => {
                    let mut dist = vec![0.0; k];
                    dist[c] = 1.0;
                    out.push((v, dist));
                }
            }
        }
        if !zero_done {
            out.push((0.0, self.zero.clone()));
        }
        out
    }

    fn best_threshold(&self, parent: &[f64], min_cases: usize) -> Option<Candidate> {
        let groups = self.groups(parent.len());
        let total: f64 = parent.iter().sum();
        let mut left = vec![0.0; parent.len()];
        let mut best: Option<Candidate> = None;
        for w in groups.windows(2) {
            for (l, g) in left.iter_mut().zip(&w[0].1) {
                *l += g;
            }
            let n_left: f64 = left.iter().sum();
            if n_left < min_cases as f64 || total - n_left < min_cases as f64 {
                continue;
            }
            let right: Vec<f64> = parent.iter().zip(&left).map(|(p, l)| p - l).collect();
            let (gain, split_info) = score_partition(parent, &[&left, &right]);
            if best.as_ref().map_or(true, |b| gain > b.gain) {
                best = Some(Candidate { gain, split_info, threshold: Some((w[0].0 + w[1].0) / 2.0) });
            }
        }
        best
    }

    fn discrete(&self, parent: &[f64], domain: &[f64], min_cases: usize) -> Option<(Candidate, Vec<(f64, Vec<f64>)>)> {
        let groups = self.groups(parent.len());
        let branches: Vec<(f64, Vec<f64>)> = domain
            .iter()
            .map(|&v| {
                let dist = groups
                    .iter()
                    .find(|(g, _)| *g == v)
                    .map_or_else(|| vec![0.0; parent.len()], |(_, d)| d.clone());
                (v, dist)
            })
            .collect();
        let big = branches
            .iter()
            .filter(|(_, d)| d.iter().sum::<f64>() >= min_cases as f64)
            .count();
        if big < 2 {
            return None;
        }
        let parts: Vec<&[f64]> = branches.iter().map(|(_, d)| d.as_slice()).collect();
        let (gain, split_info) = score_partition(parent, &parts);
        Some((Candidate { gain, split_info, threshold: None }, branches))
    }
}

/// Gain, split information and gain ratio of `attr` on the given cases.
/// Continuous attributes are scored at their best midpoint threshold;
/// `None` when no threshold exists (a single distinct value).
pub fn c45_gain_ratio<L: Label>(xs: &[SparseVec], ys: &[L], attr: u32, kind: AttrKind) -> Option<SplitScore> {
    if xs.is_empty() || xs.len() != ys.len() {
        return None;
    }
    let mut classes = ys.to_vec();
    classes.sort();
    classes.dedup();
    let labels: Vec<usize> = ys.iter().map(|y| classes.binary_search(y).unwrap()).collect();
    let mut parent = vec![0.0; classes.len()];
    for &c in &labels {
        parent[c] += 1.0;
    }
    let entries = xs
        .iter()
        .zip(&labels)
        .filter_map(|(x, &c)| Some(x.get(attr)).filter(|v| *v != 0.0).map(|v| (v, c)))
        .collect();
    let col = Column::new(entries, &parent);
    let cand = match kind {
        AttrKind::Continuous => col.best_threshold(&parent, 1)?,
        AttrKind::Discrete => {
            let parts = col.groups(parent.len());
            let refs: Vec<&[f64]> = parts.iter().map(|(_, d)| d.as_slice()).collect();
            let (gain, split_info) = score_partition(&parent, &refs);
            Candidate { gain, split_info, threshold: None }
        }
    };
    Some(SplitScore {
        gain: cand.gain,
        split_info: cand.split_info,
        ratio: (cand.split_info > 0.0).then(|| cand.gain / cand.split_info),
        threshold: cand.threshold,
    })
}

struct Builder<'a> {
    xs: &'a [SparseVec],
    labels: Vec<usize>,
    k: usize,
    kinds: &'a dyn Fn(u32) -> AttrKind,
    domains: HashMap<u32, Vec<f64>>,
    min_cases: usize,
}

enum Split {
    Threshold(u32, f64),
    Values(u32, Vec<f64>),
}

impl Builder<'_> {
    fn dist(&self, cases: &[usize]) -> Vec<f64> {
        let mut d = vec![0.0; self.k];
        for &i in cases {
            d[self.labels[i]] += 1.0;
        }
        d
    }

    fn choose(&self, cases: &[usize], dist: &[f64]) -> Option<Split> {
        let mut columns: BTreeMap<u32, Vec<(f64, usize)>> = BTreeMap::new();
        for &i in cases {
            for (j, v) in self.xs[i].iter() {
                columns.entry(j).or_default().push((v, self.labels[i]));
            }
        }
        let mut scored: Vec<(u32, Candidate, Option<Vec<f64>>)> = Vec::new();
        for (attr, entries) in columns {
            let col = Column::new(entries, dist);
            match (self.kinds)(attr) {
                AttrKind::Continuous => {
                    if let Some(c) = col.best_threshold(dist, self.min_cases) {
                        scored.push((attr, c, None));
                    }
                }
                AttrKind::Discrete => {
                    let domain = &self.domains[&attr];
                    if let Some((c, _)) = col.discrete(dist, domain, self.min_cases) {
                        scored.push((attr, c, Some(domain.clone())));
                    }
                }
            }
        }
        let positive: Vec<f64> = scored.iter().map(|s| s.1.gain).filter(|&g| g > 0.0).collect();
        if positive.is_empty() {
            return None;
        }
        let mean = positive.iter().sum::<f64>() / positive.len() as f64;
        let mut best: Option<(u32, f64, Candidate, Option<Vec<f64>>)> = None;
        for (attr, c, domain) in scored {
            if c.gain <= 0.0 || c.gain < mean - 1e-12 || c.split_info <= 0.0 {
                continue;
            }
            let ratio = c.gain / c.split_info;
            if best.as_ref().map_or(true, |b| ratio > b.1) {
                best = Some((attr, ratio, c, domain));
            }
        }
        let (attr, _, c, domain) = best?;
        Some(match domain {
            Some(values) => Split::Values(attr, values),
            None => Split::Threshold(attr, c.threshold.expect("continuous split has a threshold")),
        })
    }

    fn build(&self, cases: &[usize], parent_majority: usize) -> Node {
        let dist = self.dist(cases);
        if cases.is_empty() {
            return Node::Leaf { class: parent_majority, dist };
        }
        let class = majority(&dist);
        let one_class = dist.iter().filter(|&&n| n > 0.0).count() <= 1;
        if one_class || cases.len() < self.min_cases {
            return Node::Leaf { class, dist };
        }
        match self.choose(cases, &dist) {
            None => Node::Leaf { class, dist },
            Some(Split::Threshold(attr, threshold)) => {
                let (le, gt): (Vec<usize>, Vec<usize>) =
                    cases.iter().partition(|&&i| self.xs[i].get(attr) <= threshold);
                Node::Threshold {
                    attr,
                    threshold,
                    le: Box::new(self.build(&le, class)),
                    gt: Box::new(self.build(&gt, class)),
                    dist,
                }
            }
            Some(Split::Values(attr, values)) => {
                let branches = values
                    .iter()
                    .map(|&v| {
                        let sub: Vec<usize> = cases.iter().copied().filter(|&i| self.xs[i].get(attr) == v).collect();
                        (v, self.build(&sub, class))
                    })
                    .collect();
                Node::Values { attr, dist, branches }
            }
        }
    }
}

/// Builds a tree treating every attribute as continuous.
pub fn c45_build<L: Label>(xs: &[SparseVec], ys: &[L], params: &C45Params) -> Result<DecisionTree<L>> {
    c45_build_with(xs, ys, params, &|_| AttrKind::Continuous)
}

/// Builds a tree with per-attribute kinds.
pub fn c45_build_with<L: Label>(
    xs: &[SparseVec],
    ys: &[L],
    params: &C45Params,
    kinds: &dyn Fn(u32) -> AttrKind,
) -> Result<DecisionTree<L>> {
    if xs.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if xs.len() != ys.len() {
        return Err(Error::config("instances and labels differ in length"));
    }
    let mut classes = ys.to_vec();
    classes.sort();
    classes.dedup();
    let labels: Vec<usize> = ys.iter().map(|y| classes.binary_search(y).unwrap()).collect();

    let mut domains: HashMap<u32, Vec<f64>> = HashMap::new();
    let mut seen: HashMap<u32, usize> = HashMap::new();
    for x in xs {
        for (j, v) in x.iter() {
            if kinds(j) == AttrKind::Discrete {
                domains.entry(j).or_default().push(v);
                *seen.entry(j).or_default() += 1;
            }
        }
    }
    for (j, values) in domains.iter_mut() {
        if seen[j] < xs.len() {
            values.push(0.0);
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
    }

    let builder = Builder { xs, labels, k: classes.len(), kinds, domains, min_cases: params.min_cases.max(1) };
    let all: Vec<usize> = (0..xs.len()).collect();
    let mut root = builder.build(&all, 0);
    if params.prune {
        let coeff = deviation(params.confidence).powi(2);
        prune(&mut root, params.confidence, coeff);
    }
    Ok(DecisionTree { classes, root })
}

/// Normal deviate for a one-sided confidence level, interpolated from the
/// classic table.
fn deviation(cf: f64) -> f64 {
    const VAL: [f64; 9] = [0.0, 0.001, 0.005, 0.01, 0.05, 0.10, 0.20, 0.40, 1.00];
    const DEV: [f64; 9] = [4.0, 3.09, 2.58, 2.33, 1.65, 1.28, 0.84, 0.25, 0.00];
    let mut i = 0;
    while cf > VAL[i] {
        i += 1;
    }
    if i == 0 {
        return DEV[0];
    }
    DEV[i - 1] + (DEV[i] - DEV[i - 1]) * (cf - VAL[i - 1]) / (VAL[i] - VAL[i - 1])
}

/// Extra errors to add to `e` observed errors out of `n` cases for the
/// upper confidence bound.
pub(crate) fn add_errs(n: f64, e: f64, cf: f64, coeff: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    if e < 1e-6 {
        n * (1.0 - (cf.ln() / n).exp())
    } else if e < 0.9999 {
        let v0 = n * (1.0 - (cf.ln() / n).exp());
        v0 + e * (add_errs(n, 1.0, cf, coeff) - v0)
    } else if e + 0.5 >= n {
        0.67 * (n - e)
    } else {
        let pr = (e + 0.5 + coeff / 2.0 + (coeff * ((e + 0.5) * (1.0 - (e + 0.5) / n) + coeff / 4.0)).sqrt())
            / (n + coeff);
        n * pr - e
    }
}

fn leaf_estimate(dist: &[f64], cf: f64, coeff: f64) -> f64 {
    let n: f64 = dist.iter().sum();
    let e = n - dist[majority(dist)];
    e + add_errs(n, e, cf, coeff)
}

/// Prunes bottom-up; returns the estimated errors of the resulting subtree.
fn prune(node: &mut Node, cf: f64, coeff: f64) -> f64 {
    let subtree = match node {
        Node::Leaf { dist, .. } => return leaf_estimate(dist, cf, coeff),
        Node::Threshold { le, gt, .. } => prune(le, cf, coeff) + prune(gt, cf, coeff),
        Node::Values { branches, .. } => branches.iter_mut().map(|(_, n)| prune(n, cf, coeff)).sum(),
    };
    let dist = node.dist().to_vec();
    let as_leaf = leaf_estimate(&dist, cf, coeff);
    if as_leaf <= subtree + 0.1 {
        *node = Node::Leaf { class: majority(&dist), dist };
        as_leaf
    } else {
        subtree
    }
}
