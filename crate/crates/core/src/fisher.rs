//! Fisher information on the location parameter of a Gaussian scale mixture.
//!
//! Three routes are available:
//!
//! * closed forms for a single Gaussian (`I = A`) and for the pair
//!   `(component label, observation)` (`I = Σ w_i A_i`);
//! * adaptive quadrature of `∫ p′(x)² / p(x) dx` for univariate mixtures,
//!   the *informational mean* of the precisions;
//! * seeded Monte Carlo of `E[s(X) s(X)ᵀ]` for multivariate mixtures, with
//!   batch-means standard errors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SymmetricPD};
use crate::means::{weighted_mean, MeanKind};
use crate::mixture::{convolve_weighted_sum, MatrixMixture, ScalarMixture, ScoreWorkspace};
use crate::quadrature::integrate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

/// Estimated Fisher information: `f64` for univariate models, [`Matrix`]
/// for multivariate ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherEstimate<T> {
    pub value: T,
    pub method: Method,
    /// Quadrature: estimated absolute error. Monte Carlo: largest per-entry
    /// standard error. Closed form: zero.
    pub error_bound: f64,
    /// Number of Monte Carlo draws, if sampled.
    pub samples_used: Option<u64>,
    /// Per-entry batch-means standard errors, if sampled.
    pub standard_errors: Option<Matrix>,
}

impl<T> FisherEstimate<T> {
    fn closed_form(value: T) -> Self {
        FisherEstimate {
            value,
            method: Method::ClosedForm,
            error_bound: 0.0,
            samples_used: None,
            standard_errors: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    /// Integration runs over `[−c·σ_max, c·σ_max]`.
    pub truncation_multiplier: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            truncation_multiplier: 12.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::invalid("rel_tol", "must be positive"));
        }
        if !(self.truncation_multiplier >= 8.0 && self.truncation_multiplier.is_finite()) {
            return Err(Error::invalid(
                "truncation_multiplier",
                "must be at least 8",
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::invalid("max_subdivisions", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub samples: u64,
    pub batches: u64,
    pub seed: u64,
    pub stream: u64,
}

impl MonteCarloConfig {
    pub const DEFAULT_SAMPLES: u64 = 200_000;
    pub const DEFAULT_BATCHES: u64 = 100;

    /// Default sample and batch counts on stream 0.
    pub fn new(seed: u64) -> Self {
        MonteCarloConfig {
            samples: Self::DEFAULT_SAMPLES,
            batches: Self::DEFAULT_BATCHES,
            seed,
            stream: 0,
        }
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.batches < 2 || self.samples < self.batches {
            return Err(Error::invalid("samples", "need samples >= batches >= 2"));
        }
        if !self.samples.is_multiple_of(self.batches) {
            return Err(Error::invalid(
                "samples",
                format!(
                    "{} samples do not divide into {} batches",
                    self.samples, self.batches
                ),
            ));
        }
        if self.batches >= crate::rng::MAX_BLOCKS {
            return Err(Error::invalid("batches", "too many batches"));
        }
        Ok(())
    }
}

/// Information in a single Gaussian with precision `a`: `a` itself.
pub fn info_gaussian(precision: f64) -> Result<FisherEstimate<f64>> {
    if !(precision > 0.0 && precision.is_finite()) {
        return Err(Error::invalid("precision", "must be positive and finite"));
    }
    Ok(FisherEstimate::closed_form(precision))
}

/// Information matrix of `N(θ, A⁻¹)`: `A` itself.
pub fn info_gaussian_matrix(precision: &SymmetricPD) -> FisherEstimate<Matrix> {
    FisherEstimate::closed_form(precision.matrix().clone())
}

/// Information in the pair (component label, observation): `Σ w_i a_i`.
pub fn info_pair(m: &ScalarMixture) -> FisherEstimate<f64> {
    let v = weighted_mean(MeanKind::Arithmetic, m.weights(), m.precisions())
        .expect("mixture invariants hold");
    FisherEstimate::closed_form(v)
}

/// Matrix counterpart of [`info_pair`]: `Σ w_i A_i`.
pub fn info_pair_matrix(m: &MatrixMixture) -> FisherEstimate<Matrix> {
    let mut acc = Matrix::zeros(m.dim());
    for (w, a) in m.weights().iter().zip(m.precisions()) {
        acc.add_scaled(*w, a.matrix());
    }
    FisherEstimate::closed_form(acc)
}

/// The informational mean: `I_X = ∫ p′(x)² / p(x) dx` for the mixture
/// density `p`, by adaptive quadrature.
///
/// The integrand is evaluated as `p(x) · (x Σ r_i(x) a_i)²`, which stays
/// finite where `p` underflows. It is even, so the half line is integrated
/// and doubled. The result is checked against the harmonic and arithmetic
/// means of the precisions, which bound it from below and above.
pub fn informational_mean_scalar(
    m: &ScalarMixture,
    cfg: &QuadratureConfig,
) -> Result<FisherEstimate<f64>> {
    let est = quadrature_information(m, cfg)?;
    let (value, error_bound) = (est.value, est.error_bound);
    let lower = weighted_mean(MeanKind::Harmonic, m.weights(), m.precisions())?;
    let upper_bound = weighted_mean(MeanKind::Arithmetic, m.weights(), m.precisions())?;
    let slack = 10.0 * error_bound + 4.0 * f64::EPSILON * upper_bound;
    if value < lower - slack {
        return Err(Error::CrossCheck {
            what: "informational mean below the harmonic mean",
            computed: value,
            expected: lower,
        });
    }
    if value > upper_bound + slack {
        return Err(Error::CrossCheck {
            what: "informational mean above the arithmetic mean",
            computed: value,
            expected: upper_bound,
        });
    }
    Ok(est)
}

/// Quadrature without the bound post-check, for verifiers that report raw
/// margins.
pub(crate) fn quadrature_information(
    m: &ScalarMixture,
    cfg: &QuadratureConfig,
) -> Result<FisherEstimate<f64>> {
    cfg.validate()?;
    let upper = cfg.truncation_multiplier * m.sigma_max();

    let mut breaks = vec![0.0, upper];
    for a in m.precisions() {
        let sigma = 1.0 / a.sqrt();
        breaks.extend(
            [sigma, 3.0 * sigma, 6.0 * sigma]
                .into_iter()
                .filter(|b| *b < upper),
        );
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let integrand = |x: f64| {
        let slope = x * m.score_factor(x);
        m.log_density(x).exp() * slope * slope
    };
    let half = integrate(integrand, &breaks, cfg.rel_tol, 0.0, cfg.max_subdivisions).map_err(
        |e| match e {
            Error::Accuracy {
                best_estimate,
                error_estimate,
                subdivisions,
            } => Error::Accuracy {
                best_estimate: 2.0 * best_estimate,
                error_estimate: 2.0 * error_estimate,
                subdivisions,
            },
            other => other,
        },
    )?;
    Ok(FisherEstimate {
        value: 2.0 * half.value,
        method: Method::Quadrature,
        error_bound: 2.0 * half.abs_error,
        samples_used: None,
        standard_errors: None,
    })
}

/// Monte Carlo estimate `(1/N) Σ s(x_k) s(x_k)ᵀ` of the information matrix.
///
/// Batch `b` draws from block `b` of `(seed, stream)`, so the result does not
/// depend on how batches are scheduled. Only the upper triangle is
/// accumulated; the estimate is exactly symmetric.
pub fn informational_mean_matrix(
    m: &MatrixMixture,
    cfg: &MonteCarloConfig,
) -> Result<FisherEstimate<Matrix>> {
    cfg.validate()?;
    let d = m.dim();
    let packed = d * (d + 1) / 2;
    let per_batch = cfg.samples / cfg.batches;

    let batch_sums: Vec<Vec<f64>> = (0..cfg.batches)
        .into_par_iter()
        .map(|b| {
            let mut sampler = m.sampler(cfg.seed, cfg.stream, b);
            let mut ws = ScoreWorkspace::new(m);
            let mut x = vec![0.0; d];
            let mut s = vec![0.0; d];
            let mut acc = vec![0.0; packed];
            for _ in 0..per_batch {
                sampler.draw_into(&mut x);
                m.score_into(&x, &mut s, &mut ws);
                let mut k = 0;
                for i in 0..d {
                    for j in i..d {
                        acc[k] += s[i] * s[j];
                        k += 1;
                    }
                }
            }
            acc
        })
        .collect();

    let n = cfg.samples as f64;
    let mut total = vec![0.0; packed];
    for sums in &batch_sums {
        for (t, v) in total.iter_mut().zip(sums) {
            *t += v;
        }
    }
    let mean: Vec<f64> = total.iter().map(|t| t / n).collect();

    let nb = cfg.batches as f64;
    let se: Vec<f64> = (0..packed)
        .map(|k| {
            let ss: f64 = batch_sums
                .iter()
                .map(|sums| {
                    let dev = sums[k] / per_batch as f64 - mean[k];
                    dev * dev
                })
                .sum();
            (ss / (nb * (nb - 1.0))).sqrt()
        })
        .collect();

    let unpack = |v: &[f64]| {
        let mut out = Matrix::zeros(d);
        let mut k = 0;
        for i in 0..d {
            for j in i..d {
                out[(i, j)] = v[k];
                out[(j, i)] = v[k];
                k += 1;
            }
        }
        out
    };
    let error_bound = se.iter().copied().fold(0.0, f64::max);
    Ok(FisherEstimate {
        value: unpack(&mean),
        method: Method::MonteCarlo,
        error_bound,
        samples_used: Some(cfg.samples),
        standard_errors: Some(unpack(&se)),
    })
}

/// Information matrix of a mixture by the cheapest accurate route:
/// quadrature when `d = 1`, Monte Carlo otherwise.
pub fn informational_mean(
    m: &MatrixMixture,
    mc: &MonteCarloConfig,
    quad: &QuadratureConfig,
) -> Result<FisherEstimate<Matrix>> {
    match m.to_scalar() {
        Some(scalar) => {
            let est = informational_mean_scalar(&scalar, quad)?;
            Ok(FisherEstimate {
                value: Matrix::from_diagonal(&[est.value]),
                method: est.method,
                error_bound: est.error_bound,
                samples_used: None,
                standard_errors: None,
            })
        }
        None => informational_mean_matrix(m, mc),
    }
}

/// Information in `Σ c_i X_i` for independent mixtures `X_i`.
///
/// When every summand is a single Gaussian the quadrature value is checked
/// against the closed form `1 / Σ c_i² σ_i²`.
pub fn info_of_weighted_sum(
    ms: &[ScalarMixture],
    coeffs: &[f64],
    cfg: &QuadratureConfig,
) -> Result<FisherEstimate<f64>> {
    let sum = convolve_weighted_sum(ms, coeffs)?;
    let est = informational_mean_scalar(&sum, cfg)?;
    if ms.iter().all(|m| m.len() == 1) {
        let closed = 1.0 / sum.variance();
        if (est.value - closed).abs() > 10.0 * est.error_bound + 1e-12 * closed {
            return Err(Error::CrossCheck {
                what: "Gaussian sum information",
                computed: est.value,
                expected: closed,
            });
        }
    }
    Ok(est)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::weights::Weights;

    fn sm(w: &[f64], a: &[f64]) -> ScalarMixture {
        ScalarMixture::new(Weights::new(w.to_vec()).unwrap(), a.to_vec()).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(info_gaussian(4.0).unwrap().value, 4.0);
        assert!(info_gaussian(0.0).is_err());
        let a = SymmetricPD::from_diagonal(&[2.0, 0.5]).unwrap();
        let est = info_gaussian_matrix(&a);
        assert_eq!(est.value, Matrix::from_diagonal(&[2.0, 0.5]));
        assert_eq!(est.error_bound, 0.0);
        assert_eq!(info_pair(&sm(&[0.5, 0.5], &[1.0, 4.0])).value, 2.5);

        let mm = MatrixMixture::new(
            Weights::new(vec![0.2, 0.8]).unwrap(),
            vec![
                SymmetricPD::from_diagonal(&[1.0, 4.0]).unwrap(),
                SymmetricPD::from_diagonal(&[4.0, 1.0]).unwrap(),
            ],
        )
        .unwrap();
        let v = info_pair_matrix(&mm).value;
        assert!(v.sub(&Matrix::from_diagonal(&[3.4, 1.6])).max_abs() < 1e-15);
    }

    #[test]
    fn quadrature_single_and_equal_components() {
        let cfg = QuadratureConfig::default();
        let est = informational_mean_scalar(&sm(&[1.0], &[4.0]), &cfg).unwrap();
        assert!((est.value - 4.0).abs() < 1e-9);
        assert_eq!(est.method, Method::Quadrature);
        let third = 1.0 / 3.0;
        let w = Weights::new(vec![third, third, 1.0 - 2.0 * third]).unwrap();
        let m = ScalarMixture::new(w, vec![2.0; 3]).unwrap();
        assert!((informational_mean_scalar(&m, &cfg).unwrap().value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn quadrature_matches_frozen_value() {
        // 50-digit value from tests/oracles/high_precision.py
        let expected = 1.846_036_531_328_169_429_320_828_801_463_67;
        let est =
            informational_mean_scalar(&sm(&[0.5, 0.5], &[1.0, 4.0]), &QuadratureConfig::default())
                .unwrap();
        assert!(
            (est.value - expected).abs() < 1e-10 * expected,
            "{}",
            est.value
        );
        assert!(est.error_bound <= 1e-10 * est.value);
    }

    #[test]
    fn config_validation() {
        let bad = QuadratureConfig {
            truncation_multiplier: 4.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(MonteCarloConfig::new(1)
            .with_samples(1001)
            .validate()
            .is_err());
        let cfg = MonteCarloConfig {
            samples: 10,
            batches: 1,
            seed: 0,
            stream: 0,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn quadrature_budget_failure_is_an_accuracy_error() {
        let cfg = QuadratureConfig {
            rel_tol: 1e-15,
            max_subdivisions: 3,
            ..Default::default()
        };
        let err = informational_mean_scalar(&sm(&[0.5, 0.5], &[0.01, 100.0]), &cfg).unwrap_err();
        match err {
            Error::Accuracy { best_estimate, .. } => assert!(best_estimate > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gaussian_sum_closed_form() {
        let g =
            |v: f64| ScalarMixture::from_variances(Weights::new(vec![1.0]).unwrap(), &[v]).unwrap();
        let est =
            info_of_weighted_sum(&[g(1.0), g(3.0)], &[1.0, 1.0], &QuadratureConfig::default())
                .unwrap();
        assert!((est.value - 0.25).abs() < 1e-9);
    }

    #[test]
    fn d1_matrix_mixture_routes_to_quadrature() {
        let m = sm(&[0.5, 0.5], &[1.0, 4.0]).to_matrix_mixture();
        let est = informational_mean(&m, &MonteCarloConfig::new(3), &QuadratureConfig::default())
            .unwrap();
        assert_eq!(est.method, Method::Quadrature);
        let mc = informational_mean_matrix(&m, &MonteCarloConfig::new(3).with_samples(1_000_000))
            .unwrap();
        assert!((mc.value[(0, 0)] - est.value[(0, 0)]).abs() <= 4.0 * mc.error_bound);
    }
}
