//! Seeded instance generators.
//!
//! Positive-definite matrices are built as `Q · diag(λ) · Qᵀ` where `Q` is
//! the Gram–Schmidt orthonormalization of a Gaussian matrix (columns taken
//! with positive `R` diagonal) and each `λ` is log-uniform in the configured
//! precision range. Weights are normalized exponential draws floored at
//! [`GeneratorConfig::weight_floor`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::cases::{
    normalization_deviation, AmhmCase, HyperconvexInstance, OrderedPair, SumInformationCase,
    NORMALIZATION_ATOL,
};
use crate::linalg::{pd_inv_sqrt, Matrix, SymmetricPD};
use crate::mixture::{MatrixMixture, ScalarMixture};
use crate::rng::{stream_rng, StreamRng};
use crate::weights::Weights;

const MAX_ATTEMPTS: usize = 32;
// Normalizing matrices with a larger condition number lose too many digits
// for Σ BᵀB = I to hold within NORMALIZATION_ATOL.
const MAX_NORMALIZER_CONDITION: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    ScalarMixture,
    MatrixMixture,
    AmhmCase,
    SumInformation,
    Hyperconvex,
    OrderedPair,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 6] = [
        InstanceKind::ScalarMixture,
        InstanceKind::MatrixMixture,
        InstanceKind::AmhmCase,
        InstanceKind::SumInformation,
        InstanceKind::Hyperconvex,
        InstanceKind::OrderedPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::ScalarMixture => "scalar_mixture",
            InstanceKind::MatrixMixture => "matrix_mixture",
            InstanceKind::AmhmCase => "amhm_case",
            InstanceKind::SumInformation => "sum_information",
            InstanceKind::Hyperconvex => "hyperconvex",
            InstanceKind::OrderedPair => "ordered_pair",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InstanceKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("kind", format!("unknown instance kind `{s}`")))
    }
}

/// A generated instance of any kind. Every kind has a distinct set of
/// required fields, so the untagged form deserializes unambiguously.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Instance {
    ScalarMixture(ScalarMixture),
    MatrixMixture(MatrixMixture),
    AmhmCase(AmhmCase),
    SumInformation(SumInformationCase),
    Hyperconvex(HyperconvexInstance),
    OrderedPair(OrderedPair),
}

impl Instance {
    pub fn kind(&self) -> InstanceKind {
        match self {
            Instance::ScalarMixture(_) => InstanceKind::ScalarMixture,
            Instance::MatrixMixture(_) => InstanceKind::MatrixMixture,
            Instance::AmhmCase(_) => InstanceKind::AmhmCase,
            Instance::SumInformation(_) => InstanceKind::SumInformation,
            Instance::Hyperconvex(_) => InstanceKind::Hyperconvex,
            Instance::OrderedPair(_) => InstanceKind::OrderedPair,
        }
    }
}

/// How exponents `α` are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSampling {
    Uniform { lo: f64, hi: f64 },
    Choice(Vec<f64>),
}

impl AlphaSampling {
    fn draw(&self, rng: &mut StreamRng) -> f64 {
        match self {
            AlphaSampling::Uniform { lo, hi } => rng.random_range(*lo..=*hi),
            AlphaSampling::Choice(values) => values[rng.random_range(0..values.len())],
        }
    }
}

/// Size ranges (inclusive) and sampling ranges for generated instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub dim: (usize, usize),
    pub components: (usize, usize),
    /// Number of summands for sum-information cases.
    pub summands: (usize, usize),
    /// Precisions and eigenvalues are log-uniform in this range.
    pub precision_range: (f64, f64),
    pub weight_floor: f64,
    pub alpha: AlphaSampling,
}

impl GeneratorConfig {
    /// Defaults for `kind`.
    pub fn for_kind(kind: InstanceKind) -> Self {
        let base = GeneratorConfig {
            dim: (2, 4),
            components: (2, 4),
            summands: (2, 3),
            precision_range: (1e-2, 1e2),
            weight_floor: 1e-6,
            alpha: AlphaSampling::Uniform { lo: 0.1, hi: 1.9 },
        };
        match kind {
            InstanceKind::ScalarMixture => GeneratorConfig {
                dim: (1, 1),
                components: (2, 5),
                ..base
            },
            InstanceKind::MatrixMixture => GeneratorConfig {
                dim: (2, 3),
                components: (2, 3),
                ..base
            },
            InstanceKind::AmhmCase => GeneratorConfig {
                dim: (1, 1),
                components: (1, 6),
                ..base
            },
            InstanceKind::SumInformation => GeneratorConfig {
                dim: (1, 1),
                components: (1, 3),
                alpha: AlphaSampling::Choice(vec![0.3, 0.5, 0.7]),
                ..base
            },
            InstanceKind::Hyperconvex | InstanceKind::OrderedPair => base,
        }
    }

    /// Pins dimension and component count to single values.
    pub fn with_shape(mut self, dim: Option<usize>, components: Option<usize>) -> Self {
        if let Some(d) = dim {
            self.dim = (d, d);
        }
        if let Some(n) = components {
            self.components = (n, n);
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let range_ok = |(lo, hi): (usize, usize)| lo >= 1 && lo <= hi;
        if !range_ok(self.dim) {
            return Err(Error::invalid("dim", "need 1 <= lo <= hi"));
        }
        if !range_ok(self.components) {
            return Err(Error::invalid("components", "need 1 <= lo <= hi"));
        }
        if !range_ok(self.summands) {
            return Err(Error::invalid("summands", "need 1 <= lo <= hi"));
        }
        let (plo, phi) = self.precision_range;
        if !(plo > 0.0 && plo <= phi && phi.is_finite()) {
            return Err(Error::invalid("precision_range", "need 0 < lo <= hi < inf"));
        }
        if !(self.weight_floor > 0.0 && self.weight_floor < 0.5) {
            return Err(Error::invalid("weight_floor", "must lie in (0, 0.5)"));
        }
        match &self.alpha {
            AlphaSampling::Uniform { lo, hi }
                if !(lo.is_finite() && hi.is_finite() && lo <= hi) =>
            {
                Err(Error::invalid("alpha", "need finite lo <= hi"))
            }
            AlphaSampling::Choice(v) if v.is_empty() || v.iter().any(|a| !a.is_finite()) => {
                Err(Error::invalid("alpha", "need at least one finite choice"))
            }
            _ => Ok(()),
        }
    }
}

/// Generates an instance from stream 0 of `seed`.
pub fn generate_instance(kind: InstanceKind, cfg: &GeneratorConfig, seed: u64) -> Result<Instance> {
    generate_instance_on(kind, cfg, seed, 0)
}

/// Generates an instance from `(seed, stream)`.
pub fn generate_instance_on(
    kind: InstanceKind,
    cfg: &GeneratorConfig,
    seed: u64,
    stream: u64,
) -> Result<Instance> {
    cfg.validate()?;
    let mut g = Generator {
        rng: stream_rng(seed, stream),
        cfg,
    };
    Ok(match kind {
        InstanceKind::ScalarMixture => Instance::ScalarMixture(g.scalar_mixture(g.cfg.components)?),
        InstanceKind::MatrixMixture => Instance::MatrixMixture(g.matrix_mixture()?),
        InstanceKind::AmhmCase => Instance::AmhmCase(g.amhm_case()?),
        InstanceKind::SumInformation => Instance::SumInformation(g.sum_case()?),
        InstanceKind::Hyperconvex => Instance::Hyperconvex(g.hyperconvex()?),
        InstanceKind::OrderedPair => Instance::OrderedPair(g.ordered_pair()?),
    })
}

struct Generator<'a> {
    rng: StreamRng,
    cfg: &'a GeneratorConfig,
}

impl Generator<'_> {
    fn size(&mut self, (lo, hi): (usize, usize)) -> usize {
        self.rng.random_range(lo..=hi)
    }

    fn log_uniform(&mut self) -> f64 {
        let (lo, hi) = self.cfg.precision_range;
        let t: f64 = self.rng.random();
        (lo.ln() + t * (hi.ln() - lo.ln())).exp()
    }

    fn weights(&mut self, n: usize) -> Result<Weights> {
        let raw: Vec<f64> = (0..n)
            .map(|_| -(1.0 - self.rng.random::<f64>()).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        let floored: Vec<f64> = raw
            .iter()
            .map(|v| (v / total).max(self.cfg.weight_floor))
            .collect();
        Weights::normalized(&floored)
    }

    fn gaussian_matrix(&mut self, d: usize) -> Matrix {
        Matrix::from_fn(d, |_, _| self.rng.sample(StandardNormal))
    }

    /// Columns of a Gaussian matrix orthonormalized by modified Gram–Schmidt.
    fn orthogonal(&mut self, d: usize) -> Result<Matrix> {
        for _ in 0..MAX_ATTEMPTS {
            let g = self.gaussian_matrix(d);
            let mut cols: Vec<Vec<f64>> = (0..d)
                .map(|j| (0..d).map(|i| g[(i, j)]).collect())
                .collect();
            let mut ok = true;
            for j in 0..d {
                for k in 0..j {
                    let dot: f64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a * b).sum();
                    let prev = cols[k].clone();
                    for (c, p) in cols[j].iter_mut().zip(&prev) {
                        *c -= dot * p;
                    }
                }
                let norm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm < 1e-8 {
                    ok = false;
                    break;
                }
                cols[j].iter_mut().for_each(|v| *v /= norm);
            }
            if ok {
                return Ok(Matrix::from_fn(d, |i, j| cols[j][i]));
            }
        }
        Err(Error::Generation {
            attempts: MAX_ATTEMPTS,
            reason: "degenerate Gaussian matrix",
        })
    }

    fn pd_matrix(&mut self, d: usize) -> Result<SymmetricPD> {
        let q = self.orthogonal(d)?;
        let lambda: Vec<f64> = (0..d).map(|_| self.log_uniform()).collect();
        let a = Matrix::from_fn(d, |i, j| {
            (0..d).map(|k| q[(i, k)] * lambda[k] * q[(j, k)]).sum()
        });
        SymmetricPD::new(a.symmetrized())
    }

    fn scalar_mixture(&mut self, components: (usize, usize)) -> Result<ScalarMixture> {
        let n = self.size(components);
        let w = self.weights(n)?;
        let a = (0..n).map(|_| self.log_uniform()).collect();
        ScalarMixture::new(w, a)
    }

    fn matrix_mixture(&mut self) -> Result<MatrixMixture> {
        let d = self.size(self.cfg.dim);
        let n = self.size(self.cfg.components);
        let w = self.weights(n)?;
        let mats = (0..n)
            .map(|_| self.pd_matrix(d))
            .collect::<Result<Vec<_>>>()?;
        MatrixMixture::new(w, mats)
    }

    fn amhm_case(&mut self) -> Result<AmhmCase> {
        let n = self.size(self.cfg.components);
        let alpha = self.cfg.alpha.draw(&mut self.rng);
        let w = self.weights(n)?;
        let a = (0..n).map(|_| self.log_uniform()).collect();
        AmhmCase::new(alpha, w, a)
    }

    fn sum_case(&mut self) -> Result<SumInformationCase> {
        let k = self.size(self.cfg.summands);
        let alpha = self.cfg.alpha.draw(&mut self.rng);
        let w = self.weights(k)?;
        let summands = (0..k)
            .map(|_| self.scalar_mixture(self.cfg.components))
            .collect::<Result<Vec<_>>>()?;
        SumInformationCase::new(alpha, w, summands)
    }

    fn hyperconvex(&mut self) -> Result<HyperconvexInstance> {
        let d = self.size(self.cfg.dim);
        let n = self.size(self.cfg.components);
        let mats = (0..n)
            .map(|_| self.pd_matrix(d))
            .collect::<Result<Vec<_>>>()?;
        for _ in 0..MAX_ATTEMPTS {
            let cs: Vec<Matrix> = (0..n).map(|_| self.gaussian_matrix(d)).collect();
            let mut s = Matrix::zeros(d);
            for c in &cs {
                s = s.add(&c.transpose().matmul(c));
            }
            let Ok(s) = SymmetricPD::new(s.symmetrized()) else {
                continue;
            };
            let eig = s.eigen();
            if eig.max() > MAX_NORMALIZER_CONDITION * eig.min() {
                continue;
            }
            let root = pd_inv_sqrt(&s)?;
            let bs: Vec<Matrix> = cs.iter().map(|c| c.matmul(root.matrix())).collect();
            if normalization_deviation(&bs) <= NORMALIZATION_ATOL {
                return HyperconvexInstance::new(mats, bs);
            }
        }
        Err(Error::Generation {
            attempts: MAX_ATTEMPTS,
            reason: "near-singular normalization matrix",
        })
    }

    fn ordered_pair(&mut self) -> Result<OrderedPair> {
        let d = self.size(self.cfg.dim);
        let lesser = self.pd_matrix(d)?;
        // rank-deficient positive semidefinite increment
        let rank = self.rng.random_range(0..d);
        let mut p = Matrix::zeros(d);
        for _ in 0..rank {
            let scale = self.log_uniform().sqrt();
            let v: Vec<f64> = (0..d)
                .map(|_| scale * self.rng.sample::<f64, _>(StandardNormal))
                .collect();
            p = p.add(&Matrix::from_fn(d, |i, j| v[i] * v[j]));
        }
        let greater = SymmetricPD::new(lesser.matrix().add(&p).symmetrized())?;
        Ok(OrderedPair { greater, lesser })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in InstanceKind::ALL {
            assert_eq!(k.name().parse::<InstanceKind>().unwrap(), k);
        }
        assert!("bogus".parse::<InstanceKind>().is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        for k in InstanceKind::ALL {
            let cfg = GeneratorConfig::for_kind(k);
            let a = serde_json::to_string(&generate_instance(k, &cfg, 42).unwrap()).unwrap();
            let b = serde_json::to_string(&generate_instance(k, &cfg, 42).unwrap()).unwrap();
            let c = serde_json::to_string(&generate_instance(k, &cfg, 43).unwrap()).unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn shapes_follow_config() {
        let cfg =
            GeneratorConfig::for_kind(InstanceKind::MatrixMixture).with_shape(Some(3), Some(4));
        match generate_instance(InstanceKind::MatrixMixture, &cfg, 9).unwrap() {
            Instance::MatrixMixture(m) => {
                assert_eq!(m.dim(), 3);
                assert_eq!(m.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn weight_floor_holds() {
        let mut cfg = GeneratorConfig::for_kind(InstanceKind::ScalarMixture);
        cfg.components = (5, 5);
        for seed in 0..200 {
            if let Instance::ScalarMixture(m) =
                generate_instance(InstanceKind::ScalarMixture, &cfg, seed).unwrap()
            {
                assert!(m.weights().iter().all(|w| *w >= 0.99e-6));
            }
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let mut cfg = GeneratorConfig::for_kind(InstanceKind::AmhmCase);
        cfg.components = (3, 2);
        assert!(generate_instance(InstanceKind::AmhmCase, &cfg, 1).is_err());
        let mut cfg = GeneratorConfig::for_kind(InstanceKind::AmhmCase);
        cfg.alpha = AlphaSampling::Choice(vec![]);
        assert!(generate_instance(InstanceKind::AmhmCase, &cfg, 1).is_err());
    }
}
