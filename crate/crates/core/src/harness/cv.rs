use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::folds::make_folds;
use super::metrics::{macro_average, match_relations, prf, MatchCounts, Metrics};
use crate::corpus::{Corpus, RelationType};
use crate::error::Result;
use crate::exec::Execution;
use crate::learners::Algorithm;
use crate::pipeline::{corpus_instances, DocumentInstances, PipelineConfig, RelationExtractor};

pub const DEFAULT_FOLDS: usize = 10;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub pipeline: PipelineConfig,
    pub folds: usize,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig { pipeline: PipelineConfig::default(), folds: DEFAULT_FOLDS, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub test_docs: Vec<String>,
    pub counts: MatchCounts,
    /// Gold relations no candidate pair could reach; already counted as
    /// false negatives.
    pub unreachable_gold: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    /// Macro-averaged over folds; `None` when no fold had gold or response
    /// relations of the type.
    pub per_type: BTreeMap<RelationType, Option<Metrics>>,
    /// Per fold, counts are pooled over types, then folds are averaged.
    pub overall: Metrics,
    /// Candidate pairs labeled with each type across the corpus.
    pub instance_counts: BTreeMap<RelationType, usize>,
    pub folds: Vec<FoldResult>,
    /// Wall-clock seconds for feature extraction, training and
    /// prediction over all folds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_secs: Option<f64>,
}

impl CvReport {
    pub fn instance_total(&self) -> usize {
        self.instance_counts.values().sum()
    }

    fn assemble(folds: Vec<FoldResult>, instance_counts: BTreeMap<RelationType, usize>, runtime: f64) -> Self {
        let mut per_type = BTreeMap::new();
        for &t in &sorted_relations() {
            let contributing: Vec<Metrics> =
                folds.iter().map(|f| f.counts.get(t)).filter(|c| !c.is_empty()).map(prf).collect();
            per_type.insert(t, macro_average(&contributing));
        }
        let overall_folds: Vec<Metrics> =
            folds.iter().map(|f| f.counts.total()).filter(|c| !c.is_empty()).map(prf).collect();
        let overall = macro_average(&overall_folds).unwrap_or_default();
        CvReport { per_type, overall, instance_counts, folds, runtime_secs: Some(runtime) }
    }
}

fn sorted_relations() -> Vec<RelationType> {
    let mut v = RelationType::RELATIONS.to_vec();
    v.sort();
    v
}

/// What a fold was trained on, for instrumentation.
pub struct FoldView<'a> {
    pub fold: usize,
    pub train_docs: &'a [usize],
    pub test_docs: &'a [usize],
    pub extractor: &'a RelationExtractor,
}

pub type FoldObserver<'a> = &'a (dyn Fn(&FoldView<'_>) + Sync);

pub fn run_cv(corpus: &Corpus, cfg: &CvConfig, exec: Execution) -> Result<CvReport> {
    let tau = cfg.pipeline.hyperparameters.svm.tau;
    Ok(run_cv_taus(corpus, cfg, &[tau], exec, None)?.pop().expect("one report per tau"))
}

/// Cross-validation evaluated at several SVM margin ratios, training once
/// per fold. Other algorithms ignore `taus` beyond the report count.
pub fn run_cv_taus(
    corpus: &Corpus,
    cfg: &CvConfig,
    taus: &[f64],
    exec: Execution,
    observer: Option<FoldObserver<'_>>,
) -> Result<Vec<CvReport>> {
    cfg.pipeline.hyperparameters.validate()?;
    let plan = make_folds(corpus.len(), cfg.folds, cfg.seed)?;
    let start = Instant::now();
    let instances = corpus_instances(corpus, &cfg.pipeline.features, cfg.pipeline.max_crossings, exec);

    let per_fold = exec.map_range(plan.k(), |f| -> Result<(Vec<MatchCounts>, usize)> {
        let train_idx = plan.train_indices(f);
        let train: Vec<&DocumentInstances> = train_idx.iter().map(|&i| &instances[i]).collect();
        let extractor = RelationExtractor::train_on(&train, &cfg.pipeline, exec)?;
        if let Some(obs) = observer {
            obs(&FoldView { fold: f, train_docs: &train_idx, test_docs: &plan.folds[f], extractor: &extractor });
        }
        let mut counts = Vec::with_capacity(taus.len());
        for &tau in taus {
            let model = if cfg.pipeline.algorithm == Algorithm::Svm { extractor.with_tau(tau)? } else { extractor.clone() };
            let mut c = MatchCounts::default();
            for &d in &plan.folds[f] {
                let predicted = model.predict_instances(&instances[d]);
                c.add(&match_relations(&predicted, &corpus.documents[d].relations));
            }
            counts.push(c);
        }
        let unreachable = plan.folds[f].iter().map(|&d| instances[d].unreachable_gold).sum();
        Ok((counts, unreachable))
    });
    let per_fold: Vec<(Vec<MatchCounts>, usize)> = per_fold.into_iter().collect::<Result<_>>()?;
    let runtime = start.elapsed().as_secs_f64();

    let mut instance_counts: BTreeMap<RelationType, usize> = sorted_relations().into_iter().map(|t| (t, 0)).collect();
    for inst in &instances {
        for l in &inst.labels {
            if let Some(c) = instance_counts.get_mut(l) {
                *c += 1;
            }
        }
    }

    Ok((0..taus.len())
        .map(|t| {
            let folds = per_fold
                .iter()
                .enumerate()
                .map(|(f, (counts, unreachable))| FoldResult {
                    test_docs: plan.folds[f].iter().map(|&d| corpus.documents[d].id.clone()).collect(),
                    counts: counts[t].clone(),
                    unreachable_gold: *unreachable,
                })
                .collect();
            CvReport::assemble(folds, instance_counts.clone(), runtime)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_synthetic, Document, SynthConfig};

    fn corpus(n: usize) -> Corpus {
        generate_synthetic(&SynthConfig { n_docs: n, ..SynthConfig::default() })
    }

    fn quick(folds: usize) -> CvConfig {
        let mut cfg = CvConfig { folds, ..Default::default() };
        cfg.pipeline.algorithm = Algorithm::Paum;
        cfg
    }

    #[test]
    fn gold_counts_are_conserved() {
        let c = corpus(8);
        let report = run_cv(&c, &quick(4), Execution::Sequential).unwrap();
        for fold in &report.folds {
            for &t in &sorted_relations() {
                let gold: usize = fold
                    .test_docs
                    .iter()
                    .map(|id| c.documents.iter().find(|d| &d.id == id).unwrap())
                    .map(|d| d.relations.iter().filter(|r| r.rtype == t).count())
                    .sum();
                assert_eq!(fold.counts.get(t).gold(), gold);
            }
        }
    }

    #[test]
    fn no_gold_relations_gives_zeros() {
        let mut c = corpus(4);
        c.documents = c.documents.into_iter().map(|d| Document { relations: vec![], ..d }).collect();
        let report = run_cv(&c, &quick(2), Execution::Sequential).unwrap();
        assert_eq!(report.overall, Metrics::default());
        assert!(report.per_type.values().all(Option::is_none));
    }

    #[test]
    fn single_fold_rejected() {
        assert!(run_cv(&corpus(4), &quick(1), Execution::Sequential).is_err());
    }

    #[test]
    fn modes_give_identical_reports() {
        let c = corpus(6);
        let mut a = run_cv(&c, &quick(3), Execution::Sequential).unwrap();
        let mut b = run_cv(&c, &quick(3), Execution::Parallel).unwrap();
        a.runtime_secs = None;
        b.runtime_secs = None;
        assert_eq!(a, b);
    }
}
