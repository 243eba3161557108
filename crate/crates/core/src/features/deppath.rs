use std::collections::VecDeque;

use crate::corpus::{Document, EntityMention};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DepStep {
    pub label: String,
    /// True when the step goes from a dependent to its head.
    pub upward: bool,
}

impl DepStep {
    pub fn render(&self) -> String {
        format!("{}{}", if self.upward { '>' } else { '<' }, self.label)
    }
}

/// Path between two tokens in the undirected dependency graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepPath {
    /// Tokens from the first head to the second, both included.
    pub tokens: Vec<usize>,
    pub steps: Vec<DepStep>,
}

impl DepPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn render(&self) -> String {
        self.steps.iter().map(DepStep::render).collect()
    }
}

/// Shortest path between the heads of two mentions. Among equally short
/// paths the one with the smallest label sequence wins.
pub fn dependency_path(doc: &Document, m1: &EntityMention, m2: &EntityMention) -> Option<DepPath> {
    token_path(doc, m1.head(), m2.head())
}

pub(crate) fn token_path(doc: &Document, from: usize, to: usize) -> Option<DepPath> {
    let n = doc.tokens.len();
    if from >= n || to >= n || doc.deps.is_empty() {
        return None;
    }
    let mut adj: Vec<Vec<(usize, DepStep)>> = vec![Vec::new(); n];
    for e in &doc.deps {
        adj[e.dependent].push((e.head, DepStep { label: e.label.clone(), upward: true }));
        adj[e.head].push((e.dependent, DepStep { label: e.label.clone(), upward: false }));
    }

    // distances to the target
    let mut dist = vec![usize::MAX; n];
    dist[to] = 0;
    let mut queue = VecDeque::from([to]);
    while let Some(u) = queue.pop_front() {
        for (v, _) in &adj[u] {
            if dist[*v] == usize::MAX {
                dist[*v] = dist[u] + 1;
                queue.push_back(*v);
            }
        }
    }
    if dist[from] == usize::MAX {
        return None;
    }

    // Walk toward the target one layer at a time, keeping every node that
    // shares the smallest step sequence so far.
    let dist = &dist;
    let adj = &adj;
    let mut frontier = vec![from];
    let mut parent: Vec<Option<(usize, DepStep)>> = vec![None; n];
    for _ in 0..dist[from] {
        let best = frontier
            .iter()
            .flat_map(|&u| adj[u].iter().filter(move |(v, _)| dist[*v] + 1 == dist[u]))
            .map(|(_, step)| step)
            .min()
            .cloned()?;
        let mut next = Vec::new();
        for &u in &frontier {
            for (v, step) in &adj[u] {
                if dist[*v] + 1 == dist[u] && *step == best {
                    if parent[*v].as_ref().map_or(true, |(p, _)| u < *p) {
                        parent[*v] = Some((u, step.clone()));
                    }
                    if !next.contains(v) {
                        next.push(*v);
                    }
                }
            }
        }
        frontier = next;
    }

    let mut tokens = vec![to];
    let mut steps = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, step) = parent[cur].clone()?;
        steps.push(step);
        tokens.push(p);
        cur = p;
    }
    tokens.reverse();
    steps.reverse();
    Some(DepPath { tokens, steps })
}
