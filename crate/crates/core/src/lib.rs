//! Supervised relation extraction between typed entity mentions in
//! clinical narratives.
//!
//! The pipeline runs corpus → candidate pairs → sparse features → one of
//! five learners (naive Bayes, C4.5, k-NN, perceptron with uneven margins,
//! SVM with uneven margins) wrapped one-against-all → cross-validated
//! evaluation.

pub mod corpus;
pub mod error;
pub mod exec;
pub mod features;
pub mod harness;
pub mod learners;
pub mod pairing;
pub mod pipeline;
pub mod preprocess;
pub mod sparse;

pub use error::{Error, Result};
