//! Cross-validation, scoring and the experiment drivers.

pub mod cv;
pub mod experiments;
pub mod folds;
pub mod metrics;

pub use cv::{run_cv, run_cv_taus, CvConfig, CvReport, FoldResult, FoldView, DEFAULT_FOLDS, DEFAULT_SEED};
pub use experiments::{
    ablation_configs, curve_sizes, experiment_ablation, experiment_algorithms, experiment_learning_curve,
    experiment_tau_sweep, Experiment, ExperimentTable, TAU_VALUES,
};
pub use folds::{make_folds, FoldPlan};
pub use metrics::{macro_average, match_relations, prf, Counts, MatchCounts, Metrics};
