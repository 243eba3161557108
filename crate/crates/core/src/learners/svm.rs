//! Kernel SVM with uneven margins.
//!
//! The uneven-margin machine is the standard solution rescaled: with
//! `s = (1 + τ) / 2`, `f_τ(x) = s·f(x) + (1 − τ) / 2`, so margins 1 and
//! −1 of the standard machine map to 1 and −τ.

use serde::{Deserialize, Serialize};

use super::{smo_train, KernelSpec, SmoParams};
use crate::error::{Error, Result};
use crate::sparse::SparseVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmParams {
    pub c: f64,
    pub kernel: KernelSpec,
    /// Ratio of the negative margin to the positive one.
    pub tau: f64,
    pub tolerance: f64,
    pub cache_mb: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams { c: 0.7, kernel: KernelSpec::default(), tau: 0.8, tolerance: 1e-3, cache_mb: 100 }
    }
}

impl SvmParams {
    pub fn smo(&self) -> SmoParams {
        SmoParams { c: self.c, kernel: self.kernel, tolerance: self.tolerance, cache_mb: self.cache_mb }
    }
}

/// `f(x) = Σ coef_i K(sv_i, x) + bias` with `coef_i = α_i y_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub kernel: KernelSpec,
    pub support: Vec<SparseVec>,
    pub coef: Vec<f64>,
    pub bias: f64,
}

impl SvmModel {
    /// Standard (τ = 1) machine.
    pub fn train(xs: &[SparseVec], ys: &[i8], params: &SvmParams) -> Result<SvmModel> {
        let sol = smo_train(xs, ys, &params.smo())?;
        let mut support = Vec::new();
        let mut coef = Vec::new();
        for ((x, &y), &a) in xs.iter().zip(ys).zip(&sol.alpha) {
            if a > 0.0 {
                support.push(x.clone());
                coef.push(a * f64::from(y));
            }
        }
        Ok(SvmModel { kernel: params.kernel, support, coef, bias: sol.bias })
    }

    pub fn decision(&self, x: &SparseVec) -> f64 {
        self.support
            .iter()
            .zip(&self.coef)
            .map(|(sv, c)| c * self.kernel.eval(sv, x))
            .sum::<f64>()
            + self.bias
    }

    /// Primal weights `Σ coef_i sv_i`; only meaningful for the linear kernel.
    pub fn linear_weights(&self) -> Vec<f64> {
        let mut w = Vec::new();
        for (sv, &c) in self.support.iter().zip(&self.coef) {
            sv.add_to(&mut w, c);
        }
        w
    }
}

/// Scale and shift of the uneven-margin transform for `tau`.
pub fn uneven_margin_coefficients(tau: f64) -> Result<(f64, f64)> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::config(format!("tau must be in (0, 1], got {tau}")));
    }
    Ok(((1.0 + tau) / 2.0, (1.0 - tau) / 2.0))
}

/// Decision value of the uneven-margin machine given the standard one.
pub fn uneven_decision(standard: f64, scale: f64, shift: f64) -> f64 {
    scale * standard + shift
}

pub fn apply_uneven_margin(standard: &SvmModel, tau: f64) -> Result<SvmModel> {
    let (s, shift) = uneven_margin_coefficients(tau)?;
    Ok(SvmModel {
        kernel: standard.kernel,
        support: standard.support.clone(),
        coef: standard.coef.iter().map(|c| c * s).collect(),
        bias: standard.bias * s + shift,
    })
}
