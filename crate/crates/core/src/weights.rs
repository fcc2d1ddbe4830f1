use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `Σ w_i = 1`.
pub const WEIGHT_SUM_ATOL: f64 = 1e-12;

/// Strictly positive probability vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Weights(Vec<f64>);

impl Weights {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::invalid("weights", "at least one weight is required"));
        }
        if let Some((i, v)) = w
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::invalid(
                "weights",
                format!("weight {i} is {v}; every weight must be positive and finite"),
            ));
        }
        let sum = compensated_sum(w.iter().copied());
        if (sum - 1.0).abs() > WEIGHT_SUM_ATOL {
            return Err(Error::invalid(
                "weights",
                format!("weights sum to {sum}, expected 1 within {WEIGHT_SUM_ATOL:e}"),
            ));
        }
        Ok(Weights(w))
    }

    /// Normalizes positive finite values to sum to one.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        let sum = compensated_sum(raw.iter().copied());
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::invalid(
                "weights",
                "cannot normalize a non-positive total",
            ));
        }
        Self::new(raw.iter().map(|v| v / sum).collect())
    }

    /// `n` equal weights.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::normalized(&vec![1.0; n])
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }
}

/// Neumaier-compensated summation.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

impl TryFrom<Vec<f64>> for Weights {
    type Error = Error;

    fn try_from(w: Vec<f64>) -> Result<Self> {
        Weights::new(w)
    }
}

impl From<Weights> for Vec<f64> {
    fn from(w: Weights) -> Self {
        w.0
    }
}

impl std::ops::Index<usize> for Weights {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
