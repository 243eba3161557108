//! Perceptron with uneven margins.

use serde::{Deserialize, Serialize};

use super::check_binary;
use crate::error::{Error, Result};
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PaumParams {
    /// Margin required of positive examples.
    pub tau_pos: f64,
    /// Margin required of negative examples.
    pub tau_neg: f64,
    pub learning_rate: f64,
    /// Value of a constant extra feature appended to every instance; 0
    /// disables it.
    pub opt_b: f64,
    pub max_epochs: usize,
}

impl Default for PaumParams {
    fn default() -> Self {
        PaumParams { tau_pos: 20.0, tau_neg: 5.0, learning_rate: 1.0, opt_b: 0.0, max_epochs: 100 }
    }
}

/// Primal linear classifier `f(x) = <w, x> + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Weight of the constant bias feature and its value.
    pub bias_feature: (f64, f64),
    /// Epochs run before stopping.
    pub epochs: usize,
    /// True when training hit the epoch cap instead of converging.
    pub non_separable: bool,
}

impl LinearModel {
    pub fn decision(&self, x: &SparseVec) -> f64 {
        x.dot_dense(&self.weights) + self.bias_feature.0 * self.bias_feature.1 + self.bias
    }
}

pub fn paum_train(xs: &[SparseVec], ys: &[i8], params: &PaumParams) -> Result<LinearModel> {
    if xs.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    check_binary(xs.len(), ys)?;
    let dim = xs.iter().map(SparseVec::dim).max().unwrap_or(0);
    let extra = params.opt_b * params.opt_b;
    let r_sq = xs.iter().map(|x| x.norm_sq() + extra).fold(0.0, f64::max);
    let eta = params.learning_rate;

    let mut model = LinearModel {
        weights: vec![0.0; dim],
        bias: 0.0,
        bias_feature: (0.0, params.opt_b),
        epochs: 0,
        non_separable: false,
    };
    loop {
        if model.epochs == params.max_epochs {
            model.non_separable = true;
            log::debug!("perceptron stopped after {} epochs without converging", model.epochs);
            break;
        }
        model.epochs += 1;
        let mut updated = false;
        for (x, &y) in xs.iter().zip(ys) {
            let y = f64::from(y);
            let tau = if y > 0.0 { params.tau_pos } else { params.tau_neg };
            if y * model.decision(x) <= tau {
                x.add_to(&mut model.weights, eta * y);
                model.bias_feature.0 += eta * y * params.opt_b;
                model.bias += eta * y * r_sq;
                updated = true;
            }
        }
        if !updated {
            break;
        }
    }
    Ok(model)
}
