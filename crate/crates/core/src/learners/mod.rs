//! The five classifiers and the one-against-all wrapper, all over sparse
//! vectors.

pub mod c45;
pub mod kernel;
pub mod knn;
pub mod naive_bayes;
pub mod ova;
pub mod paum;
pub mod smo;
pub mod svm;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use c45::{c45_build, c45_build_with, c45_gain_ratio, AttrKind, C45Params, DecisionTree, Node, SplitScore};
pub use kernel::KernelSpec;
pub use knn::{KnnModel, KnnParams};
pub use naive_bayes::{nb_train, NaiveBayesModel};
pub use ova::{ova_train, OvaModel};
pub use paum::{paum_train, LinearModel, PaumParams};
pub use smo::{smo_train, DualSolution, SmoParams};
pub use svm::{apply_uneven_margin, SvmModel, SvmParams};

use crate::error::{Error, Result};

/// Class label usable by the multi-class learners. Ties between labels are
/// broken toward the smallest label.
pub trait Label: Clone + Ord + Hash + fmt::Debug + Send + Sync {}

impl<T: Clone + Ord + Hash + fmt::Debug + Send + Sync> Label for T {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[serde(rename = "nb")]
    NaiveBayes,
    C45,
    Knn,
    Paum,
    Svm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::NaiveBayes,
        Algorithm::C45,
        Algorithm::Knn,
        Algorithm::Paum,
        Algorithm::Svm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "nb",
            Algorithm::C45 => "c45",
            Algorithm::Knn => "knn",
            Algorithm::Paum => "paum",
            Algorithm::Svm => "svm",
        }
    }

    /// Column heading in the algorithm comparison table.
    pub fn table_label(self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "Naive Bayes",
            Algorithm::C45 => "C4.5",
            Algorithm::Knn => "KNN",
            Algorithm::Paum => "PAUM",
            Algorithm::Svm => "SVM UM",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::config(format!("unknown algorithm `{s}` (expected nb, c45, knn, paum or svm)")))
    }
}

/// Settings for every learner; only the block for the chosen algorithm is
/// used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Hyperparameters {
    pub c45: C45Params,
    pub knn: KnnParams,
    pub paum: PaumParams,
    pub svm: SvmParams,
}

impl Hyperparameters {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::config(msg));
        if self.c45.min_cases == 0 {
            return bad("c45 min_cases must be >= 1");
        }
        if !(self.c45.confidence > 0.0 && self.c45.confidence < 1.0) {
            return bad("c45 pruning confidence must be in (0, 1)");
        }
        if self.knn.k == 0 {
            return bad("knn k must be >= 1");
        }
        let p = &self.paum;
        if !(p.tau_pos >= 0.0 && p.tau_neg >= 0.0) {
            return bad("paum margins must be non-negative");
        }
        if !(p.learning_rate > 0.0) {
            return bad("paum learning rate must be positive");
        }
        if p.max_epochs == 0 {
            return bad("paum max epochs must be >= 1");
        }
        let s = &self.svm;
        if !(s.c > 0.0) {
            return bad("svm C must be positive");
        }
        if !(s.tau > 0.0 && s.tau <= 1.0) {
            return bad("svm tau must be in (0, 1]");
        }
        if !(s.tolerance > 0.0) {
            return bad("svm tolerance must be positive");
        }
        if let KernelSpec::Polynomial { degree: 0 } = s.kernel {
            return bad("polynomial degree must be >= 1");
        }
        Ok(())
    }
}

/// Checks that a binary problem has +1/-1 labels, one per instance.
pub(crate) fn check_binary(xs_len: usize, ys: &[i8]) -> Result<()> {
    if xs_len != ys.len() {
        return Err(Error::config("instances and labels differ in length"));
    }
    if ys.iter().any(|&y| y != 1 && y != -1) {
        return Err(Error::config("binary labels must be +1 or -1"));
    }
    Ok(())
}
