//! Zero-centred Gaussian scale mixtures.
//!
//! A mixture is described by weights `w_i` and precisions `a_i = 1/σ_i²`
//! (or precision matrices `A_i = V_i⁻¹`). The common location is fixed at
//! zero: information on a location parameter does not depend on where the
//! location sits.
//!
//! Densities, responsibilities and scores are evaluated with max-shifted
//! exponents so that components of wildly different scales do not underflow.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve_lower_transpose_in_place, SymmetricPD};
use crate::rng::{block_rng, StreamRng};
use crate::weights::Weights;

/// Default cap on the number of components produced by
/// [`convolve_weighted_sum`].
pub const DEFAULT_COMPONENT_CAP: usize = 1_000_000;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// One realized `(component, point)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDraw {
    /// Zero-based index of the component that generated `point`.
    pub component: usize,
    pub point: Vec<f64>,
}

/// `log Σ exp(v_i)` with the maximum factored out.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Normalizes log-weights into probabilities in place.
fn softmax_in_place(values: &mut [f64]) {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for v in values.iter_mut() {
        *v = (*v - max).exp();
        total += *v;
    }
    for v in values.iter_mut() {
        *v /= total;
    }
}

fn cumulative(w: &Weights) -> Vec<f64> {
    let mut acc = 0.0;
    w.iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

/// Inverse-CDF component selection.
fn pick_component(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

/// Univariate Gaussian scale mixture `Σ w_i N(0, 1/a_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScalarMixtureRepr", into = "ScalarMixtureRepr")]
pub struct ScalarMixture {
    weights: Weights,
    precisions: Vec<f64>,
    #[serde(skip)]
    log_norm: Vec<f64>,
    #[serde(skip)]
    sigmas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ScalarMixtureRepr {
    weights: Weights,
    precisions: Vec<f64>,
}

impl TryFrom<ScalarMixtureRepr> for ScalarMixture {
    type Error = Error;

    fn try_from(r: ScalarMixtureRepr) -> Result<Self> {
        ScalarMixture::new(r.weights, r.precisions)
    }
}

impl From<ScalarMixture> for ScalarMixtureRepr {
    fn from(m: ScalarMixture) -> Self {
        ScalarMixtureRepr {
            weights: m.weights,
            precisions: m.precisions,
        }
    }
}

impl ScalarMixture {
    pub fn new(weights: Weights, precisions: Vec<f64>) -> Result<Self> {
        if weights.len() != precisions.len() {
            return Err(Error::invalid(
                "precisions",
                format!(
                    "{} precisions for {} weights",
                    precisions.len(),
                    weights.len()
                ),
            ));
        }
        if let Some((i, a)) = precisions
            .iter()
            .enumerate()
            .find(|(_, a)| !(**a > 0.0 && a.is_finite()))
        {
            return Err(Error::invalid(
                "precisions",
                format!("precision {i} is {a}; precisions must be positive and finite"),
            ));
        }
        let log_norm = weights
            .iter()
            .zip(&precisions)
            .map(|(w, a)| w.ln() + 0.5 * a.ln() - LN_SQRT_2PI)
            .collect();
        let sigmas = precisions.iter().map(|a| 1.0 / a.sqrt()).collect();
        Ok(ScalarMixture {
            weights,
            precisions,
            log_norm,
            sigmas,
        })
    }

    /// Builds a mixture from component variances `σ_i²`.
    pub fn from_variances(weights: Weights, variances: &[f64]) -> Result<Self> {
        if let Some((i, v)) = variances
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::invalid(
                "variances",
                format!("variance {i} is {v}; variances must be positive and finite"),
            ));
        }
        Self::new(weights, variances.iter().map(|v| 1.0 / v).collect())
    }

    /// A single Gaussian with precision `a`.
    pub fn gaussian(precision: f64) -> Result<Self> {
        Self::new(Weights::new(vec![1.0])?, vec![precision])
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn precisions(&self) -> &[f64] {
        &self.precisions
    }

    pub fn variances(&self) -> Vec<f64> {
        self.precisions.iter().map(|a| 1.0 / a).collect()
    }

    pub fn len(&self) -> usize {
        self.precisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.precisions.is_empty()
    }

    /// Largest component standard deviation.
    pub fn sigma_max(&self) -> f64 {
        self.sigmas.iter().copied().fold(0.0, f64::max)
    }

    /// Same weights, every precision multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(
            self.weights.clone(),
            self.precisions.iter().map(|a| a * lambda).collect(),
        )
    }

    /// `Σ w_i φ_{σ_i}(x)`, summed directly.
    pub fn density(&self, x: f64) -> f64 {
        self.weights
            .iter()
            .zip(&self.precisions)
            .map(|(w, a)| w * (a / (2.0 * PI)).sqrt() * (-0.5 * a * x * x).exp())
            .sum()
    }

    fn component_logs(&self, x: f64, out: &mut [f64]) {
        for ((o, ln), a) in out.iter_mut().zip(&self.log_norm).zip(&self.precisions) {
            *o = ln - 0.5 * a * x * x;
        }
    }

    pub fn log_density(&self, x: f64) -> f64 {
        let mut logs = vec![0.0; self.len()];
        self.component_logs(x, &mut logs);
        log_sum_exp(&logs)
    }

    /// Posterior component probabilities given `x`.
    ///
    /// Exponents are shifted by the leading component with the constant and
    /// quadratic parts differenced separately, so components of equal
    /// precision keep exactly their weight ratio at every `x`.
    pub fn responsibilities(&self, x: f64) -> Vec<f64> {
        let mut r = vec![0.0; self.len()];
        self.component_logs(x, &mut r);
        let lead = (0..r.len())
            .max_by(|&i, &j| r[i].total_cmp(&r[j]))
            .expect("at least one component");
        let (ln_k, a_k) = (self.log_norm[lead], self.precisions[lead]);
        let xx = x * x;
        let mut total = 0.0;
        for ((v, ln), a) in r.iter_mut().zip(&self.log_norm).zip(&self.precisions) {
            *v = ((ln - ln_k) - 0.5 * (a - a_k) * xx).exp();
            total += *v;
        }
        r.iter_mut().for_each(|v| *v /= total);
        r
    }

    /// `d/dx log p(x) = −x Σ r_i(x) a_i`.
    pub fn score(&self, x: f64) -> f64 {
        -x * self.score_factor(x)
    }

    /// `Σ r_i(x) a_i`, the posterior mean precision at `x`.
    pub(crate) fn score_factor(&self, x: f64) -> f64 {
        let r = self.responsibilities(x);
        r.iter().zip(&self.precisions).map(|(r, a)| r * a).sum()
    }

    /// `Σ w_i / a_i`
    pub fn variance(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.precisions)
            .map(|(w, a)| w / a)
            .sum()
    }

    /// `count` draws from block 0 of `(seed, stream)`.
    pub fn sample(&self, count: usize, seed: u64, stream: u64) -> Vec<SampleDraw> {
        let mut rng = block_rng(seed, stream, 0);
        let cdf = cumulative(&self.weights);
        (0..count)
            .map(|_| {
                let (component, x) = self.draw_with(&cdf, &mut rng);
                SampleDraw {
                    component,
                    point: vec![x],
                }
            })
            .collect()
    }

    fn draw_with(&self, cdf: &[f64], rng: &mut StreamRng) -> (usize, f64) {
        let i = pick_component(cdf, rng.random::<f64>());
        let z: f64 = rng.sample(StandardNormal);
        (i, self.sigmas[i] * z)
    }

    /// View as a one-dimensional matrix mixture.
    pub fn to_matrix_mixture(&self) -> MatrixMixture {
        let mats = self
            .precisions
            .iter()
            .map(|&a| SymmetricPD::from_diagonal(&[a]).expect("positive precision"))
            .collect();
        MatrixMixture::new(self.weights.clone(), mats).expect("valid scalar mixture")
    }
}

/// Multivariate Gaussian scale mixture `Σ w_i N(0, A_i⁻¹)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixMixtureRepr", into = "MatrixMixtureRepr")]
pub struct MatrixMixture {
    weights: Weights,
    precisions: Vec<SymmetricPD>,
    dim: usize,
    // ln w_i + ½ ln det A_i − ½ ln det A_0, built from ratios of Cholesky
    // pivots so that scaling every A_i by a power of two leaves it unchanged.
    #[serde(skip)]
    log_norm: Vec<f64>,
    // ½ ln det A_0 − (d/2) ln 2π
    #[serde(skip)]
    log_base: f64,
}

#[derive(Serialize, Deserialize)]
struct MatrixMixtureRepr {
    weights: Weights,
    precision_matrices: Vec<SymmetricPD>,
}

impl TryFrom<MatrixMixtureRepr> for MatrixMixture {
    type Error = Error;

    fn try_from(r: MatrixMixtureRepr) -> Result<Self> {
        MatrixMixture::new(r.weights, r.precision_matrices)
    }
}

impl From<MatrixMixture> for MatrixMixtureRepr {
    fn from(m: MatrixMixture) -> Self {
        MatrixMixtureRepr {
            weights: m.weights,
            precision_matrices: m.precisions,
        }
    }
}

/// Scratch space for allocation-free score evaluation.
#[derive(Debug, Clone)]
pub struct ScoreWorkspace {
    products: Vec<f64>,
    logits: Vec<f64>,
}

impl ScoreWorkspace {
    pub fn new(m: &MatrixMixture) -> Self {
        ScoreWorkspace {
            products: vec![0.0; m.len() * m.dim()],
            logits: vec![0.0; m.len()],
        }
    }
}

impl MatrixMixture {
    pub fn new(weights: Weights, precisions: Vec<SymmetricPD>) -> Result<Self> {
        if weights.len() != precisions.len() {
            return Err(Error::invalid(
                "precision_matrices",
                format!(
                    "{} matrices for {} weights",
                    precisions.len(),
                    weights.len()
                ),
            ));
        }
        let dim = precisions[0].dim();
        if let Some(a) = precisions.iter().find(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: a.dim(),
            });
        }
        let reference = precisions[0].factor().diagonal();
        let log_norm = weights
            .iter()
            .zip(&precisions)
            .map(|(w, a)| {
                let pivots = a.factor().diagonal();
                w.ln()
                    + pivots
                        .iter()
                        .zip(&reference)
                        .map(|(p, r)| (p / r).ln())
                        .sum::<f64>()
            })
            .collect();
        let log_base = reference.iter().map(|p| p.ln()).sum::<f64>() - dim as f64 * LN_SQRT_2PI;
        Ok(MatrixMixture {
            weights,
            precisions,
            dim,
            log_norm,
            log_base,
        })
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn precisions(&self) -> &[SymmetricPD] {
        &self.precisions
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.precisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.precisions.is_empty()
    }

    /// Same weights, every precision matrix multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        let mats = self
            .precisions
            .iter()
            .map(|a| a.scaled(lambda))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.weights.clone(), mats)
    }

    /// The scalar mixture when `dim == 1`.
    pub fn to_scalar(&self) -> Option<ScalarMixture> {
        (self.dim == 1).then(|| {
            let a = self.precisions.iter().map(|a| a.matrix()[(0, 0)]).collect();
            ScalarMixture::new(self.weights.clone(), a).expect("valid one-dimensional mixture")
        })
    }

    // Fills `products` with A_i x and `logits` with the unnormalized log
    // posterior of each component.
    fn evaluate(&self, x: &[f64], ws: &mut ScoreWorkspace) {
        let d = self.dim;
        for (i, a) in self.precisions.iter().enumerate() {
            let y = &mut ws.products[i * d..(i + 1) * d];
            a.matrix().mul_vec_into(x, y);
            let q: f64 = x.iter().zip(y.iter()).map(|(u, v)| u * v).sum();
            ws.logits[i] = self.log_norm[i] - 0.5 * q;
        }
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        let mut ws = ScoreWorkspace::new(self);
        self.evaluate(x, &mut ws);
        self.log_base + log_sum_exp(&ws.logits)
    }

    pub fn density(&self, x: &[f64]) -> f64 {
        self.log_density(x).exp()
    }

    pub fn responsibilities(&self, x: &[f64]) -> Vec<f64> {
        let mut ws = ScoreWorkspace::new(self);
        self.evaluate(x, &mut ws);
        softmax_in_place(&mut ws.logits);
        ws.logits
    }

    /// `∇ log p(x) = −Σ r_i(x) A_i x`
    pub fn score(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.score_into(x, &mut out, &mut ScoreWorkspace::new(self));
        out
    }

    pub fn score_into(&self, x: &[f64], out: &mut [f64], ws: &mut ScoreWorkspace) {
        let d = self.dim;
        self.evaluate(x, ws);
        softmax_in_place(&mut ws.logits);
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, r) in ws.logits.iter().enumerate() {
            for (o, y) in out.iter_mut().zip(&ws.products[i * d..(i + 1) * d]) {
                *o -= r * y;
            }
        }
    }

    /// `Σ w_i A_i⁻¹`
    pub fn covariance(&self) -> Result<SymmetricPD> {
        let inverses = self
            .precisions
            .iter()
            .map(crate::linalg::pd_inverse)
            .collect::<Result<Vec<_>>>()?;
        crate::means::matrix_arithmetic_mean(&self.weights, &inverses)
    }

    /// `count` draws from block 0 of `(seed, stream)`.
    pub fn sample(&self, count: usize, seed: u64, stream: u64) -> Vec<SampleDraw> {
        let mut sampler = self.sampler(seed, stream, 0);
        (0..count)
            .map(|_| {
                let mut point = vec![0.0; self.dim];
                let component = sampler.draw_into(&mut point);
                SampleDraw { component, point }
            })
            .collect()
    }

    /// Streaming sampler over block `block` of `(seed, stream)`.
    pub fn sampler(&self, seed: u64, stream: u64, block: u64) -> MatrixSampler<'_> {
        MatrixSampler {
            mixture: self,
            cdf: cumulative(&self.weights),
            rng: block_rng(seed, stream, block),
        }
    }
}

/// Draws points without allocating.
///
/// Each draw consumes one uniform for the component followed by `d` standard
/// normals `z`; the point is `L⁻ᵀ z` where `A_i = L Lᵀ`, which has covariance
/// `A_i⁻¹`.
pub struct MatrixSampler<'a> {
    mixture: &'a MatrixMixture,
    cdf: Vec<f64>,
    rng: StreamRng,
}

impl MatrixSampler<'_> {
    /// Writes the next point into `point` and returns its component.
    pub fn draw_into(&mut self, point: &mut [f64]) -> usize {
        let i = pick_component(&self.cdf, self.rng.random::<f64>());
        for z in point.iter_mut() {
            *z = self.rng.sample(StandardNormal);
        }
        solve_lower_transpose_in_place(self.mixture.precisions[i].factor(), point);
        i
    }
}

/// Exact mixture law of `Σ c_i X_i` for independent `X_i`, with the default
/// component cap.
pub fn convolve_weighted_sum(ms: &[ScalarMixture], coeffs: &[f64]) -> Result<ScalarMixture> {
    convolve_weighted_sum_capped(ms, coeffs, DEFAULT_COMPONENT_CAP)
}

/// One output component per index tuple `(j_1, …, j_k)` with weight
/// `Π w_{i,j_i}` and variance `Σ c_i² σ²_{i,j_i}`.
pub fn convolve_weighted_sum_capped(
    ms: &[ScalarMixture],
    coeffs: &[f64],
    cap: usize,
) -> Result<ScalarMixture> {
    if ms.is_empty() {
        return Err(Error::invalid(
            "summands",
            "at least one summand is required",
        ));
    }
    if ms.len() != coeffs.len() {
        return Err(Error::DimensionMismatch {
            expected: ms.len(),
            found: coeffs.len(),
        });
    }
    if let Some(c) = coeffs.iter().find(|c| !(c.is_finite() && **c != 0.0)) {
        return Err(Error::invalid(
            "coefficients",
            format!("{c} is not finite and nonzero"),
        ));
    }
    let required = ms
        .iter()
        .fold(1u128, |acc, m| acc.saturating_mul(m.len() as u128));
    if required > cap as u128 {
        return Err(Error::Capacity { required, cap });
    }

    let mut parts: Vec<(f64, f64)> = vec![(1.0, 0.0)];
    for (m, c) in ms.iter().zip(coeffs) {
        let c2 = c * c;
        let mut next = Vec::with_capacity(parts.len() * m.len());
        for &(w, v) in &parts {
            for (wj, aj) in m.weights().iter().zip(m.precisions()) {
                next.push((w * wj, v + c2 / aj));
            }
        }
        parts = next;
    }
    let raw: Vec<f64> = parts.iter().map(|p| p.0).collect();
    let weights = Weights::normalized(&raw)?;
    let variances: Vec<f64> = parts.iter().map(|p| p.1).collect();
    ScalarMixture::from_variances(weights, &variances)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn sm(w: &[f64], a: &[f64]) -> ScalarMixture {
        ScalarMixture::new(Weights::new(w.to_vec()).unwrap(), a.to_vec()).unwrap()
    }

    #[test]
    fn density_examples() {
        let inv_sqrt_2pi = 1.0 / (2.0 * PI).sqrt();
        assert!((sm(&[1.0], &[1.0]).density(0.0) - 0.398_942_280_4).abs() < 1e-10);
        let m = sm(&[0.5, 0.5], &[1.0, 4.0]);
        assert!((m.density(0.0) - 1.5 * inv_sqrt_2pi).abs() < 1e-15);
    }

    #[test]
    fn density_frozen_extended_precision() {
        // 50-digit value from tests/oracles/high_precision.py
        let expected = 0.125_509_433_358_914_836_363_407_973_909_935;
        let got = sm(&[0.3, 0.7], &[1.0, 0.25]).density(1.7);
        assert!(((got - expected) / expected).abs() < 1e-14, "{got}");
    }

    #[test]
    fn log_density_far_tail() {
        let m = sm(&[1.0], &[1.0]);
        assert!((m.log_density(0.0) + LN_SQRT_2PI).abs() < 1e-15);
        // 50-digit value from tests/oracles/high_precision.py
        let expected = -451.612_085_713_764_618_051_197_561_857_863_794;
        let got = sm(&[0.5, 0.5], &[1.0, 100.0]).log_density(30.0);
        assert!(got.is_finite());
        assert!(((got - expected) / expected).abs() < 1e-10, "{got}");
        // density itself underflows nowhere near here but the log form keeps
        // going where the direct sum would give zero
        assert!(sm(&[0.5, 0.5], &[1.0, 100.0]).log_density(40.0).is_finite());
    }

    #[test]
    fn responsibilities_examples() {
        assert_eq!(sm(&[1.0], &[3.0]).responsibilities(2.0), vec![1.0]);
        let m = sm(&[0.3, 0.7], &[2.0, 2.0]);
        for x in [-5.0, 0.0, 1.3, 40.0] {
            let r = m.responsibilities(x);
            assert!((r[0] - 0.3).abs() < 1e-15 && (r[1] - 0.7).abs() < 1e-15);
        }
        // 50-digit values from tests/oracles/high_precision.py
        let r = sm(&[0.5, 0.5], &[1.0, 4.0]).responsibilities(3.0);
        assert!((r[0] - 0.999_997_258_089_345_326_483_426_976_642).abs() < 1e-15);
        assert!((r[1] - 2.741_910_654_673_516_573_023_357_863e-6).abs() < 1e-18);
    }

    #[test]
    fn score_examples() {
        assert_eq!(sm(&[1.0], &[1.0]).score(1.5), -1.5);
        let mm = MatrixMixture::new(
            Weights::new(vec![1.0]).unwrap(),
            vec![SymmetricPD::from_diagonal(&[2.0, 3.0]).unwrap()],
        )
        .unwrap();
        assert_eq!(mm.score(&[1.0, 1.0]), vec![-2.0, -3.0]);

        let m = sm(&[0.5, 0.5], &[1.0, 4.0]);
        let h = 1e-5;
        let fd = (m.log_density(0.8 + h) - m.log_density(0.8 - h)) / (2.0 * h);
        assert!((m.score(0.8) - fd).abs() < 1e-8);
    }

    #[test]
    fn matrix_log_density_matches_closed_form_gaussian() {
        let a = SymmetricPD::new(Matrix::from_rows(&[vec![2.0, 0.3], vec![0.3, 1.0]]).unwrap())
            .unwrap();
        let det: f64 = 2.0 * 1.0 - 0.09;
        let mm = MatrixMixture::new(Weights::new(vec![1.0]).unwrap(), vec![a.clone()]).unwrap();
        let x = [0.4, -1.1];
        let expected = 0.5 * det.ln() - 2.0 * LN_SQRT_2PI - 0.5 * a.matrix().quadratic_form(&x);
        assert!((mm.log_density(&x) - expected).abs() < 1e-14);
    }

    #[test]
    fn variance_examples() {
        assert_eq!(sm(&[0.5, 0.5], &[1.0, 4.0]).variance(), 0.625);
        let mm = MatrixMixture::new(
            Weights::new(vec![1.0]).unwrap(),
            vec![SymmetricPD::identity(3)],
        )
        .unwrap();
        assert_eq!(mm.covariance().unwrap().matrix(), &Matrix::identity(3));
    }

    #[test]
    fn sample_edge_cases() {
        let m = sm(&[0.5, 0.5], &[1.0, 4.0]);
        assert!(m.sample(0, 1, 2).is_empty());
        assert_eq!(m.sample(100, 1, 2), m.sample(100, 1, 2));
        assert_ne!(m.sample(100, 1, 2), m.sample(100, 1, 3));
    }

    #[test]
    fn single_gaussian_sample_variance() {
        let m = sm(&[1.0], &[4.0]);
        let n = 1_000_000;
        let draws = m.sample(n, 11, 0);
        let var = draws.iter().map(|d| d.point[0] * d.point[0]).sum::<f64>() / n as f64;
        assert!(
            (var - 0.25).abs() <= 4.0 * (2.0 / n as f64).sqrt() * 0.25,
            "{var}"
        );
    }

    #[test]
    fn component_frequencies() {
        let m = sm(&[0.3, 0.7], &[1.0, 9.0]);
        let n = 200_000;
        let draws = m.sample(n, 5, 1);
        let hits = draws.iter().filter(|d| d.component == 0).count() as f64 / n as f64;
        assert!((hits - 0.3).abs() <= 4.0 * (0.3 * 0.7 / n as f64).sqrt());
    }

    #[test]
    fn convolution_examples() {
        let g =
            |v: f64| ScalarMixture::from_variances(Weights::new(vec![1.0]).unwrap(), &[v]).unwrap();
        let s = convolve_weighted_sum(&[g(1.0), g(3.0)], &[1.0, 1.0]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.variances(), vec![4.0]);

        let m1 = ScalarMixture::from_variances(Weights::new(vec![0.5, 0.5]).unwrap(), &[1.0, 2.0])
            .unwrap();
        let s = convolve_weighted_sum(&[m1, g(3.0)], &[1.0, 1.0]).unwrap();
        assert_eq!(s.weights().as_slice(), &[0.5, 0.5]);
        assert_eq!(s.variances(), vec![4.0, 5.0]);
    }

    #[test]
    fn convolution_errors() {
        let m = sm(&[0.5, 0.5], &[1.0, 2.0]);
        assert!(matches!(
            convolve_weighted_sum_capped(&[m.clone(), m.clone(), m.clone()], &[1.0; 3], 7),
            Err(Error::Capacity {
                required: 8,
                cap: 7
            })
        ));
        assert!(convolve_weighted_sum(std::slice::from_ref(&m), &[0.0]).is_err());
        assert!(convolve_weighted_sum(std::slice::from_ref(&m), &[f64::NAN]).is_err());
        assert!(convolve_weighted_sum(&[m], &[1.0, 2.0]).is_err());
        assert!(convolve_weighted_sum(&[], &[]).is_err());
    }

    #[test]
    fn construction_errors() {
        let w = Weights::new(vec![0.5, 0.5]).unwrap();
        assert!(ScalarMixture::new(w.clone(), vec![1.0]).is_err());
        assert!(ScalarMixture::new(w.clone(), vec![1.0, 0.0]).is_err());
        assert!(ScalarMixture::new(w.clone(), vec![1.0, f64::INFINITY]).is_err());
        assert!(
            MatrixMixture::new(w, vec![SymmetricPD::identity(2), SymmetricPD::identity(3)])
                .is_err()
        );
    }

    #[test]
    fn serde_uses_named_fields() {
        let m = sm(&[0.25, 0.75], &[1.0, 4.0]);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"weights":[0.25,0.75],"precisions":[1.0,4.0]}"#);
        let back: ScalarMixture = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        let mm = m.to_matrix_mixture();
        let json = serde_json::to_string(&mm).unwrap();
        assert_eq!(
            json,
            r#"{"weights":[0.25,0.75],"precision_matrices":[[[1.0]],[[4.0]]]}"#
        );
        assert_eq!(serde_json::from_str::<MatrixMixture>(&json).unwrap(), mm);
    }
}
