//! The four experiment drivers and their table layouts.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::cv::{run_cv, run_cv_taus, CvConfig, CvReport};
use super::metrics::Metrics;
use crate::corpus::{Corpus, RelationType};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::features::{FeatureConfig, FeatureSet, DEFAULT_WINDOW};
use crate::learners::Algorithm;

pub const TAU_VALUES: [f64; 5] = [1.0, 0.8, 0.6, 0.4, 0.2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Algorithms,
    Tau,
    Ablation,
    Curve,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Algorithms => "algorithms",
            Experiment::Tau => "tau",
            Experiment::Ablation => "ablation",
            Experiment::Curve => "curve",
        }
    }
}

/// One cross-validation report per column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTable {
    pub experiment: Experiment,
    pub columns: Vec<String>,
    pub reports: Vec<CvReport>,
}

pub fn experiment_algorithms(corpus: &Corpus, base: &CvConfig, exec: Execution) -> Result<ExperimentTable> {
    let mut reports = Vec::new();
    for algorithm in Algorithm::ALL {
        let mut cfg = base.clone();
        cfg.pipeline.algorithm = algorithm;
        log::info!("cross-validating {algorithm}");
        reports.push(run_cv(corpus, &cfg, exec)?);
    }
    Ok(ExperimentTable {
        experiment: Experiment::Algorithms,
        columns: Algorithm::ALL.iter().map(|a| a.table_label().to_string()).collect(),
        reports,
    })
}

/// SVM cross-validation at each margin ratio; one training per fold.
pub fn experiment_tau_sweep(corpus: &Corpus, base: &CvConfig, taus: &[f64], exec: Execution) -> Result<ExperimentTable> {
    if taus.is_empty() {
        return Err(Error::config("no tau values given"));
    }
    let mut cfg = base.clone();
    cfg.pipeline.algorithm = Algorithm::Svm;
    let reports = run_cv_taus(corpus, &cfg, taus, exec, None)?;
    Ok(ExperimentTable {
        experiment: Experiment::Tau,
        columns: taus.iter().map(|t| format!("{t:.1}")).collect(),
        reports,
    })
}

/// Column labels and feature configurations of the feature-set study, in
/// table order.
pub fn ablation_configs() -> Vec<(&'static str, FeatureConfig)> {
    use FeatureSet::*;
    let mut cfg = FeatureConfig::new([Tok, Atype]);
    cfg.window = DEFAULT_WINDOW;
    let mut out = vec![("Tok6+Atype", cfg.clone())];
    for (label, set) in [("+Dir", Dir), ("+Str", Str), ("+POS", Pos), ("+Inter", Inter), ("+Event", Event)] {
        cfg = cfg.with(set);
        out.push((label, cfg.clone()));
    }
    out.push(("Allgen", FeatureConfig::allgen()));
    out.push(("NoTok", FeatureConfig::notok()));
    let dep = cfg.with(Dep);
    out.push(("+Dep", dep.clone()));
    out.push(("+Syndist", dep.with(Syndist)));
    out
}

pub fn experiment_ablation(corpus: &Corpus, base: &CvConfig, exec: Execution) -> Result<ExperimentTable> {
    let mut columns = Vec::new();
    let mut reports = Vec::new();
    for (label, features) in ablation_configs() {
        let mut cfg = base.clone();
        cfg.pipeline.features = features;
        log::info!("cross-validating feature column {label}");
        reports.push(run_cv(corpus, &cfg, exec)?);
        columns.push(label.to_string());
    }
    Ok(ExperimentTable { experiment: Experiment::Ablation, columns, reports })
}

/// Corpus sizes for the learning curve: half, three quarters and all of
/// the corpus, which is 20, 30 and 40 for 40 documents.
pub fn curve_sizes(n_docs: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = [2usize, 3, 4].iter().map(|q| (n_docs * q + 2) / 4).collect();
    sizes.dedup();
    sizes
}

pub fn experiment_learning_curve(corpus: &Corpus, base: &CvConfig, exec: Execution) -> Result<ExperimentTable> {
    let mut columns = Vec::new();
    let mut reports = Vec::new();
    for size in curve_sizes(corpus.len()) {
        let subset = corpus.prefix(size);
        let mut cfg = base.clone();
        cfg.folds = cfg.folds.min(size);
        log::info!("cross-validating the first {size} documents");
        reports.push(run_cv(&subset, &cfg, exec)?);
        columns.push(format!("C{size}"));
    }
    Ok(ExperimentTable { experiment: Experiment::Curve, columns, reports })
}

fn pct(m: Option<Metrics>, f: fn(&Metrics) -> f64) -> String {
    m.map_or_else(|| "-".to_string(), |m| format!("{:.2}", f(&m) * 100.0))
}

const METRICS: [(&str, fn(&Metrics) -> f64); 3] =
    [("P", |m| m.precision), ("R", |m| m.recall), ("F1", |m| m.f1)];

impl ExperimentTable {
    fn metric_rows(&self, out: &mut String, label: &str, counts: Option<Vec<usize>>, pick: &dyn Fn(&CvReport) -> Option<Metrics>) {
        let mut first = true;
        let mut row = |out: &mut String, metric: &str, cells: Vec<String>| {
            let _ = writeln!(out, "{}\t{}\t{}", if first { label } else { "" }, metric, cells.join("\t"));
            first = false;
        };
        if let Some(counts) = counts {
            row(out, "Count", counts.iter().map(usize::to_string).collect());
        }
        for (name, f) in METRICS {
            row(out, name, self.reports.iter().map(|r| pct(pick(r), f)).collect());
        }
    }

    /// Tab-separated table with the row and column labels of the
    /// published layout; metrics in percent.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let first_header = match self.experiment {
            Experiment::Tau => "Uneven margin (τ)",
            _ => "Relationship type",
        };
        let _ = writeln!(out, "{first_header}\tMetric (%)\t{}", self.columns.join("\t"));
        let counts = self.experiment == Experiment::Curve;

        if self.experiment != Experiment::Tau {
            for t in RelationType::RELATIONS {
                let c = counts.then(|| self.reports.iter().map(|r| r.instance_counts.get(&t).copied().unwrap_or(0)).collect());
                self.metric_rows(&mut out, t.table_label(), c, &|r| r.per_type.get(&t).copied().flatten());
            }
        }
        let overall_label = if self.experiment == Experiment::Tau { "Overall Relations" } else { "Overall" };
        let c = counts.then(|| self.reports.iter().map(CvReport::instance_total).collect());
        self.metric_rows(&mut out, overall_label, c, &|r| Some(r.overall));

        if self.experiment == Experiment::Algorithms {
            let times: Vec<String> = self
                .reports
                .iter()
                .map(|r| r.runtime_secs.map_or_else(|| "-".into(), |s| format!("{s:.3}")))
                .collect();
            let _ = writeln!(out, "Run Time in seconds\t\t{}", times.join("\t"));
        }
        out
    }

    /// Same table with wall-clock fields removed, for reproducibility
    /// checks.
    pub fn without_runtime(&self) -> ExperimentTable {
        let mut out = self.clone();
        for r in &mut out.reports {
            r.runtime_secs = None;
        }
        out
    }

    pub fn to_json(&self, include_runtime: bool) -> String {
        let table = if include_runtime { self.clone() } else { self.without_runtime() };
        serde_json::to_string_pretty(&table).expect("experiment tables always serialize")
    }
}
