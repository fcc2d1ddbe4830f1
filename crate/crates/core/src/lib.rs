//! # infomean
//!
//! Fisher information of Gaussian scale mixtures and the mean-function
//! inequalities it produces.
//!
//! For weights `w_i` and precisions `a_i = 1/σ_i²`, the Fisher information on
//! the location of the mixture `Σ w_i N(θ, σ_i²)` is a mean of the `a_i`: it
//! lies between the weighted harmonic mean `[Σ w_i/a_i]⁻¹` and the weighted
//! arithmetic mean `Σ w_i a_i`, and it is homogeneous of degree one. This
//! crate calls it the *informational mean* and computes it by adaptive
//! quadrature. For precision matrices `A_i` the same sandwich holds in the
//! Loewner order, with no commutativity assumption; the information matrix is
//! estimated by seeded Monte Carlo.
//!
//! Around these estimators sit reproducible verifiers for the related
//! inequalities: the matrix arithmetic–harmonic mean inequality, inverse
//! monotonicity, hyperconvexity of `A²` and `A⁻¹`, the information
//! inequality for weighted sums of independent variables, and its
//! generalized arithmetic–harmonic form `Σ w_i^α a_i ≥ [Σ w_i^β / a_i]⁻¹`
//! for `α + β = 2`.
//!
//! ```
//! use infomean::{informational_mean_scalar, QuadratureConfig, ScalarMixture, Weights};
//!
//! let m = ScalarMixture::new(Weights::new(vec![0.5, 0.5])?, vec![1.0, 4.0])?;
//! let info = informational_mean_scalar(&m, &QuadratureConfig::default())?;
//! assert!(1.6 < info.value && info.value < 2.5);
//! # Ok::<(), infomean::Error>(())
//! ```
//!
//! The guide in `book/` walks through each piece; its code listings are
//! compiled and run as doctests of this crate.

#![forbid(unsafe_code)]

pub mod error;
pub mod fisher;
pub mod inequality;
pub mod linalg;
pub mod means;
pub mod mixture;
pub mod quadrature;
pub mod rng;
pub mod weights;

pub use error::{Error, Result};
pub use fisher::{
    info_gaussian, info_gaussian_matrix, info_of_weighted_sum, info_pair, info_pair_matrix,
    informational_mean, informational_mean_matrix, informational_mean_scalar, FisherEstimate,
    Method, MonteCarloConfig, QuadratureConfig,
};
pub use linalg::{pd_inv_sqrt, pd_inverse, sym_eigen, Matrix, SymEigen, SymmetricPD};
pub use means::{
    loewner_compare, matrix_arithmetic_mean, matrix_harmonic_mean, weighted_mean, LoewnerResult,
    MeanKind, Relation,
};
pub use mixture::{convolve_weighted_sum, MatrixMixture, SampleDraw, ScalarMixture};
pub use weights::Weights;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/mixtures.md")]
    mod mixtures {}
    #[doc = include_str!("../../../book/src/informational-mean.md")]
    mod informational_mean {}
    #[doc = include_str!("../../../book/src/matrix-means.md")]
    mod matrix_means {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
    #[doc = include_str!("../../../book/src/inequalities.md")]
    mod inequalities {}
    #[doc = include_str!("../../../book/src/reproducibility.md")]
    mod reproducibility {}
}
