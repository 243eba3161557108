use serde::{Deserialize, Serialize};

use crate::sparse::SparseVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum KernelSpec {
    Linear,
    /// `(<x, y> + 1)^degree`
    Polynomial { degree: u32 },
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec::Polynomial { degree: 2 }
    }
}

impl KernelSpec {
    pub fn eval(self, x: &SparseVec, y: &SparseVec) -> f64 {
        self.from_dot(x.dot(y))
    }

    pub fn from_dot(self, dot: f64) -> f64 {
        match self {
            KernelSpec::Linear => dot,
            KernelSpec::Polynomial { degree } => (dot + 1.0).powi(degree as i32),
        }
    }
}
