use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymmetricPD};
use crate::mixture::ScalarMixture;
use crate::weights::Weights;

/// Tolerance on `‖Σ B_iᵀ B_i − I‖_max` for hyperconvex weights.
pub const NORMALIZATION_ATOL: f64 = 1e-10;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("alpha", "must be finite"))
    }
}

/// Inputs of `Σ w_i^α a_i ≥ [Σ w_i^β / a_i]⁻¹` with `α + β = 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AmhmRepr", into = "AmhmRepr")]
pub struct AmhmCase {
    alpha: f64,
    weights: Weights,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct AmhmRepr {
    alpha: f64,
    weights: Weights,
    values: Vec<f64>,
}

impl AmhmCase {
    pub fn new(alpha: f64, weights: Weights, values: Vec<f64>) -> Result<Self> {
        check_alpha(alpha)?;
        if weights.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(
                "values",
                format!("{v} is not positive and finite"),
            ));
        }
        Ok(AmhmCase {
            alpha,
            weights,
            values,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `2 − α`
    pub fn beta(&self) -> f64 {
        2.0 - self.alpha
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl TryFrom<AmhmRepr> for AmhmCase {
    type Error = Error;

    fn try_from(r: AmhmRepr) -> Result<Self> {
        AmhmCase::new(r.alpha, r.weights, r.values)
    }
}

impl From<AmhmCase> for AmhmRepr {
    fn from(c: AmhmCase) -> Self {
        AmhmRepr {
            alpha: c.alpha,
            weights: c.weights,
            values: c.values,
        }
    }
}

/// Independent mixtures `X_i` with weights `w_i` for
/// `I(Σ w_i^β X_i) ≤ Σ w_i^{2α} I(X_i)`, `α + β = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SumRepr", into = "SumRepr")]
pub struct SumInformationCase {
    alpha: f64,
    weights: Weights,
    summands: Vec<ScalarMixture>,
}

#[derive(Serialize, Deserialize)]
struct SumRepr {
    alpha: f64,
    weights: Weights,
    summands: Vec<ScalarMixture>,
}

impl SumInformationCase {
    pub fn new(alpha: f64, weights: Weights, summands: Vec<ScalarMixture>) -> Result<Self> {
        check_alpha(alpha)?;
        if weights.len() != summands.len() {
            return Err(Error::DimensionMismatch {
                expected: weights.len(),
                found: summands.len(),
            });
        }
        Ok(SumInformationCase {
            alpha,
            weights,
            summands,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `1 − α`
    pub fn beta(&self) -> f64 {
        1.0 - self.alpha
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn summands(&self) -> &[ScalarMixture] {
        &self.summands
    }

    /// `w_i^β`, the coefficients of the weighted sum.
    pub fn coefficients(&self) -> Vec<f64> {
        let beta = self.beta();
        self.weights.iter().map(|w| w.powf(beta)).collect()
    }
}

impl TryFrom<SumRepr> for SumInformationCase {
    type Error = Error;

    fn try_from(r: SumRepr) -> Result<Self> {
        SumInformationCase::new(r.alpha, r.weights, r.summands)
    }
}

impl From<SumInformationCase> for SumRepr {
    fn from(c: SumInformationCase) -> Self {
        SumRepr {
            alpha: c.alpha,
            weights: c.weights,
            summands: c.summands,
        }
    }
}

/// Matrices `A_i` with matrix weights `B_i` normalized by `Σ B_iᵀ B_i = I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HyperconvexRepr", into = "HyperconvexRepr")]
pub struct HyperconvexInstance {
    matrices: Vec<SymmetricPD>,
    weight_matrices: Vec<Matrix>,
}

#[derive(Serialize, Deserialize)]
struct HyperconvexRepr {
    matrices: Vec<SymmetricPD>,
    weight_matrices: Vec<Matrix>,
}

impl HyperconvexInstance {
    pub fn new(matrices: Vec<SymmetricPD>, weight_matrices: Vec<Matrix>) -> Result<Self> {
        if matrices.is_empty() || matrices.len() != weight_matrices.len() {
            return Err(Error::invalid(
                "weight_matrices",
                "need one weight matrix per matrix, and at least one of each",
            ));
        }
        let d = matrices[0].dim();
        for dim in matrices
            .iter()
            .map(SymmetricPD::dim)
            .chain(weight_matrices.iter().map(Matrix::dim))
        {
            if dim != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: dim,
                });
            }
        }
        let deviation = normalization_deviation(&weight_matrices);
        if deviation > NORMALIZATION_ATOL {
            return Err(Error::invalid(
                "weight_matrices",
                format!("sum of BᵀB deviates from identity by {deviation:e}"),
            ));
        }
        Ok(HyperconvexInstance {
            matrices,
            weight_matrices,
        })
    }

    /// Scalar weights as matrix weights `B_i = √w_i · I`.
    pub fn scalar_weights(weights: &Weights, matrices: Vec<SymmetricPD>) -> Result<Self> {
        let d = matrices.first().map(SymmetricPD::dim).unwrap_or(0);
        let bs = weights
            .iter()
            .map(|w| Matrix::identity(d).scale(w.sqrt()))
            .collect();
        Self::new(matrices, bs)
    }

    pub fn matrices(&self) -> &[SymmetricPD] {
        &self.matrices
    }

    pub fn weight_matrices(&self) -> &[Matrix] {
        &self.weight_matrices
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }
}

/// `‖Σ B_iᵀ B_i − I‖_max`
pub fn normalization_deviation(bs: &[Matrix]) -> f64 {
    let d = bs[0].dim();
    let mut acc = Matrix::zeros(d);
    for b in bs {
        acc = acc.add(&b.transpose().matmul(b));
    }
    acc.sub(&Matrix::identity(d)).max_abs()
}

impl TryFrom<HyperconvexRepr> for HyperconvexInstance {
    type Error = Error;

    fn try_from(r: HyperconvexRepr) -> Result<Self> {
        HyperconvexInstance::new(r.matrices, r.weight_matrices)
    }
}

impl From<HyperconvexInstance> for HyperconvexRepr {
    fn from(h: HyperconvexInstance) -> Self {
        HyperconvexRepr {
            matrices: h.matrices,
            weight_matrices: h.weight_matrices,
        }
    }
}

/// A pair `greater ≥ lesser > 0`.
///
/// The ordering is the claim under test, so it is not enforced here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedPair {
    pub greater: SymmetricPD,
    pub lesser: SymmetricPD,
}

/// Caller-supplied matrices with `lower ≤ A_i ≤ upper` for every component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub lower: Matrix,
    pub upper: Matrix,
}
