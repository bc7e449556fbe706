//! Kernel evaluation: the inner product in the implicit feature space,
//! never materializing the mapping itself.

use super::FeatureVector;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    Linear,
    Rbf { gamma: f64 },
    Polynomial { degree: u32, scale: f64, coef0: f64 },
}

impl KernelSpec {
    /// The convention used when nothing is configured: rbf with
    /// gamma = 1/dimension.
    pub fn rbf_auto(dim: usize) -> Self {
        KernelSpec::Rbf {
            gamma: 1.0 / dim.max(1) as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Rbf { gamma } => {
                if gamma > 0.0 && gamma.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!(
                        "rbf gamma must be a positive finite number, got {gamma}"
                    )))
                }
            }
            KernelSpec::Polynomial {
                degree,
                scale,
                coef0,
            } => {
                if degree < 1 {
                    return Err(Error::InvalidConfig(
                        "polynomial degree must be >= 1".into(),
                    ));
                }
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "polynomial scale must be positive, got {scale}"
                    )));
                }
                if !(coef0 >= 0.0 && coef0.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "polynomial coef0 must be non-negative, got {coef0}"
                    )));
                }
                Ok(())
            }
        }
    }
}

pub fn kernel_eval(spec: &KernelSpec, x: &FeatureVector, y: &FeatureVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let a = x.as_slice();
    let b = y.as_slice();
    let value = match *spec {
        KernelSpec::Linear => dot(a, b),
        KernelSpec::Rbf { gamma } => {
            let mut d2 = 0.0;
            for (u, v) in a.iter().zip(b) {
                let d = u - v;
                d2 += d * d;
            }
            (-gamma * d2).exp()
        }
        KernelSpec::Polynomial {
            degree,
            scale,
            coef0,
        } => (scale * dot(a, b) + coef0).powi(degree as i32),
    };
    Ok(value)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}
