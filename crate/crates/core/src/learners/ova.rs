//! One-against-all multi-class wrapper: a binary model per relation type,
//! the highest positive score wins, otherwise null.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::svm::{uneven_decision, uneven_margin_coefficients};
use super::{
    c45_build, nb_train, paum_train, smo_train, Algorithm, DecisionTree, Hyperparameters, KernelSpec, KnnModel,
    LinearModel, NaiveBayesModel,
};
use crate::corpus::RelationType;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinaryModel {
    /// Fixed score, used when training data has only one side.
    Constant(f64),
    NaiveBayes(NaiveBayesModel<i8>),
    Tree(DecisionTree<i8>),
    Paum(LinearModel),
    /// Standard-margin SVM over the shared support vector pool.
    Svm { terms: Vec<(u32, f64)>, bias: f64 },
    /// Vote share from the shared nearest-neighbour model.
    Knn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OvaModel {
    algorithm: Algorithm,
    hyperparameters: Hyperparameters,
    classes: Vec<RelationType>,
    models: Vec<BinaryModel>,
    /// Support vectors referenced by the SVM models.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    support: Vec<SparseVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    knn: Option<KnnModel<RelationType>>,
}

fn relabel(ys: &[RelationType], class: RelationType) -> Vec<i8> {
    ys.iter().map(|y| if *y == class { 1 } else { -1 }).collect()
}

/// Trains one binary model per relation type, in parallel when `exec`
/// allows.
pub fn ova_train(
    xs: &[SparseVec],
    ys: &[RelationType],
    algorithm: Algorithm,
    hp: &Hyperparameters,
    exec: Execution,
) -> Result<OvaModel> {
    if xs.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if xs.len() != ys.len() {
        return Err(Error::config("instances and labels differ in length"));
    }
    hp.validate()?;
    let mut classes = RelationType::RELATIONS.to_vec();
    classes.sort();

    let knn = match algorithm {
        Algorithm::Knn => Some(KnnModel::train(xs.to_vec(), ys.to_vec(), &hp.knn)?),
        _ => None,
    };

    enum Trained {
        Done(BinaryModel),
        Svm(Vec<f64>, f64),
    }
    let trained = exec.map(&classes, |&class| -> Result<Trained> {
        let yb = relabel(ys, class);
        let positives = yb.iter().filter(|&&y| y > 0).count();
        if positives == 0 {
            log::warn!("no training instances of {class}; its classifier always says no");
            return Ok(Trained::Done(BinaryModel::Constant(-1.0)));
        }
        if positives == yb.len() {
            log::warn!("every training instance is {class}; its classifier always says yes");
            return Ok(Trained::Done(BinaryModel::Constant(1.0)));
        }
        Ok(match algorithm {
            Algorithm::NaiveBayes => Trained::Done(BinaryModel::NaiveBayes(nb_train(xs, &yb)?)),
            Algorithm::C45 => Trained::Done(BinaryModel::Tree(c45_build(xs, &yb, &hp.c45)?)),
            Algorithm::Paum => Trained::Done(BinaryModel::Paum(paum_train(xs, &yb, &hp.paum)?)),
            Algorithm::Knn => Trained::Done(BinaryModel::Knn),
            Algorithm::Svm => {
                let sol = smo_train(xs, &yb, &hp.svm.smo())?;
                let coef = sol.alpha.iter().zip(&yb).map(|(a, &y)| a * f64::from(y)).collect();
                Trained::Svm(coef, sol.bias)
            }
        })
    });

    let mut pool: BTreeMap<usize, u32> = BTreeMap::new();
    let mut pending = Vec::with_capacity(classes.len());
    for t in trained {
        pending.push(t?);
    }
    for t in &pending {
        if let Trained::Svm(coef, _) = t {
            for (i, _) in coef.iter().enumerate().filter(|(_, c)| **c != 0.0) {
                pool.insert(i, 0);
            }
        }
    }
    for (slot, id) in pool.values_mut().zip(0u32..) {
        *slot = id;
    }
    let support = pool.keys().map(|&i| xs[i].clone()).collect();
    let models = pending
        .into_iter()
        .map(|t| match t {
            Trained::Done(m) => m,
            Trained::Svm(coef, bias) => BinaryModel::Svm {
                terms: coef
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0.0)
                    .map(|(i, &c)| (pool[&i], c))
                    .collect(),
                bias,
            },
        })
        .collect();

    Ok(OvaModel { algorithm, hyperparameters: hp.clone(), classes, models, support, knn })
}

impl OvaModel {
    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn hyperparameters(&self) -> &Hyperparameters {
        &self.hyperparameters
    }

    pub fn classes(&self) -> &[RelationType] {
        &self.classes
    }

    pub fn binary_model(&self, class: RelationType) -> Option<&BinaryModel> {
        self.classes.iter().position(|&c| c == class).map(|i| &self.models[i])
    }

    pub fn support_vector_count(&self) -> usize {
        self.support.len()
    }

    /// Same binary models with a different SVM margin ratio.
    pub fn with_tau(&self, tau: f64) -> Result<OvaModel> {
        uneven_margin_coefficients(tau)?;
        let mut out = self.clone();
        out.hyperparameters.svm.tau = tau;
        Ok(out)
    }

    /// Replaces a class's model by one that never fires.
    pub fn without_class(&self, class: RelationType) -> OvaModel {
        let mut out = self.clone();
        if let Some(i) = out.classes.iter().position(|&c| c == class) {
            out.models[i] = BinaryModel::Constant(-1.0);
        }
        out
    }

    /// Binary decision score per class, in class order. Positive means the
    /// binary model claims the instance.
    pub fn scores(&self, x: &SparseVec) -> Vec<f64> {
        let kernel_row: Vec<f64> = if self.support.is_empty() {
            Vec::new()
        } else {
            let kernel: KernelSpec = self.hyperparameters.svm.kernel;
            self.support.iter().map(|sv| kernel.eval(sv, x)).collect()
        };
        let knn_votes = self.knn.as_ref().map(|m| {
            let votes = m.votes(x);
            let total: f64 = votes.iter().map(|v| v.1).sum();
            (votes, total)
        });
        let svm_coefs = uneven_margin_coefficients(self.hyperparameters.svm.tau).unwrap_or((1.0, 0.0));

        self.classes
            .iter()
            .zip(&self.models)
            .map(|(&class, model)| match model {
                BinaryModel::Constant(s) => *s,
                BinaryModel::NaiveBayes(m) => m.log_odds(x, &1),
                BinaryModel::Tree(t) => t.class_probability(x, &1) - 0.5,
                BinaryModel::Paum(m) => m.decision(x),
                BinaryModel::Svm { terms, bias } => {
                    let f: f64 = terms.iter().map(|&(i, c)| c * kernel_row[i as usize]).sum::<f64>() + bias;
                    uneven_decision(f, svm_coefs.0, svm_coefs.1)
                }
                BinaryModel::Knn => {
                    let (votes, total) = knn_votes.as_ref().expect("knn model present");
                    let share = votes.iter().find(|(l, _)| *l == class).map_or(0.0, |(_, w)| w / total);
                    share - 0.5
                }
            })
            .collect()
    }

    /// Highest positive score wins; ties go to the smaller class; no
    /// positive score means null.
    pub fn classify(&self, x: &SparseVec) -> RelationType {
        let scores = self.scores(x);
        let mut best: Option<usize> = None;
        for (i, &s) in scores.iter().enumerate() {
            if s > 0.0 && best.map_or(true, |b| s > scores[b]) {
                best = Some(i);
            }
        }
        best.map_or(RelationType::Null, |i| self.classes[i])
    }

    pub fn classify_batch(&self, xs: &[SparseVec], exec: Execution) -> Vec<RelationType> {
        exec.map(xs, |x| self.classify(x))
    }
}
