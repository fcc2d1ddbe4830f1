//! Verifiers. Each returns raw margins (positive when the inequality holds
//! with room to spare) together with the tolerance it is judged against;
//! nothing is clamped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fisher::{
    info_of_weighted_sum, informational_mean_matrix, quadrature_information, FisherEstimate,
    MonteCarloConfig, QuadratureConfig,
};
use crate::inequality::cases::{
    AmhmCase, Envelope, HyperconvexInstance, OrderedPair, SumInformationCase,
};
use crate::linalg::{pd_inverse, Matrix, SymmetricPD};
use crate::means::{
    default_loewner_atol, loewner_compare, matrix_arithmetic_mean, matrix_harmonic_mean,
    weighted_mean, LoewnerResult, MeanKind,
};
use crate::mixture::{MatrixMixture, ScalarMixture};
use crate::weights::Weights;

/// A signed margin and the tolerance it is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub value: f64,
    pub tolerance: f64,
}

impl Margin {
    pub fn new(value: f64, tolerance: f64) -> Self {
        Margin { value, tolerance }
    }

    /// `value ≥ −tolerance`. NaN never passes.
    pub fn passed(&self) -> bool {
        self.value >= -self.tolerance
    }

    /// Margin of the claim `A ≥ B` carried by a Loewner comparison of `A`
    /// against `B`.
    pub fn from_geq(r: &LoewnerResult) -> Self {
        Margin::new(r.geq_margin(), r.tolerance_used)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarBounds {
    pub information: FisherEstimate<f64>,
    pub harmonic: f64,
    pub arithmetic: f64,
    /// `I − harmonic`
    pub lower: Margin,
    /// `arithmetic − I`
    pub upper: Margin,
}

/// Two-sided bound `[Σ w_i/a_i]⁻¹ ≤ I ≤ Σ w_i a_i` for the quadrature value
/// of `I`. Tolerance is ten times the quadrature error bound.
pub fn verify_scalar_bounds(m: &ScalarMixture, cfg: &QuadratureConfig) -> Result<ScalarBounds> {
    let information = quadrature_information(m, cfg)?;
    let harmonic = weighted_mean(MeanKind::Harmonic, m.weights(), m.precisions())?;
    let arithmetic = weighted_mean(MeanKind::Arithmetic, m.weights(), m.precisions())?;
    let tol = 10.0 * information.error_bound;
    Ok(ScalarBounds {
        lower: Margin::new(information.value - harmonic, tol),
        upper: Margin::new(arithmetic - information.value, tol),
        information,
        harmonic,
        arithmetic,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeCheck {
    pub lower: Matrix,
    pub upper: Matrix,
    /// `Î` compared against `lower` (expected `GEQ`).
    pub above_lower: LoewnerResult,
    /// `upper` compared against `Î` (expected `GEQ`).
    pub below_upper: LoewnerResult,
}

impl EnvelopeCheck {
    pub fn margins(&self) -> [Margin; 2] {
        [
            Margin::from_geq(&self.above_lower),
            Margin::from_geq(&self.below_upper),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixBounds {
    pub estimate: FisherEstimate<Matrix>,
    pub harmonic: Matrix,
    pub arithmetic: Matrix,
    /// `Î` compared against the harmonic mean (expected `GEQ`).
    pub lower: LoewnerResult,
    /// The arithmetic mean compared against `Î` (expected `GEQ`).
    pub upper: LoewnerResult,
    /// `Î` compared against the inverse mixture covariance (expected `GEQ`).
    pub cramer_rao: LoewnerResult,
    /// `(min_i λ_min(A_i))·I ≤ Î ≤ (max_i λ_max(A_i))·I`
    pub canonical_envelope: EnvelopeCheck,
    pub envelope: Option<EnvelopeCheck>,
}

impl MatrixBounds {
    pub fn margins(&self) -> Vec<Margin> {
        let mut out = vec![Margin::from_geq(&self.lower), Margin::from_geq(&self.upper)];
        out.extend(self.canonical_envelope.margins());
        if let Some(env) = &self.envelope {
            out.extend(env.margins());
        }
        out
    }
}

/// Loewner sandwich `H ≤ Î ≤ A` for a Monte Carlo estimate `Î` of the
/// information matrix, with `H` and `A` the weighted harmonic and arithmetic
/// matrix means of the component precisions.
///
/// Tolerance is the default Loewner tolerance plus `4 · max SE · d`, which
/// covers a four-standard-error perturbation of every entry.
pub fn verify_matrix_bounds(
    m: &MatrixMixture,
    cfg: &MonteCarloConfig,
    envelope: Option<&Envelope>,
) -> Result<MatrixBounds> {
    let estimate = informational_mean_matrix(m, cfg)?;
    let harmonic = matrix_harmonic_mean(m.weights(), m.precisions())?
        .matrix()
        .clone();
    let arithmetic = matrix_arithmetic_mean(m.weights(), m.precisions())?
        .matrix()
        .clone();
    let mc_slack = 4.0 * estimate.error_bound * m.dim() as f64;
    let tol = |a: &Matrix, b: &Matrix| default_loewner_atol(a, b) + mc_slack;
    let i_hat = &estimate.value;

    let lower = loewner_compare(i_hat, &harmonic, tol(i_hat, &harmonic));
    let upper = loewner_compare(&arithmetic, i_hat, tol(&arithmetic, i_hat));
    let inv_cov = pd_inverse(&m.covariance()?)?.matrix().clone();
    let cramer_rao = loewner_compare(i_hat, &inv_cov, tol(i_hat, &inv_cov));

    let check_envelope = |env: &Envelope| {
        if env.lower.dim() != m.dim() || env.upper.dim() != m.dim() {
            return Err(Error::DimensionMismatch {
                expected: m.dim(),
                found: env.lower.dim().max(env.upper.dim()),
            });
        }
        Ok(EnvelopeCheck {
            above_lower: loewner_compare(i_hat, &env.lower, tol(i_hat, &env.lower)),
            below_upper: loewner_compare(&env.upper, i_hat, tol(&env.upper, i_hat)),
            lower: env.lower.clone(),
            upper: env.upper.clone(),
        })
    };
    let canonical_envelope = check_envelope(&canonical_envelope(m.precisions()))?;
    let envelope = envelope.map(check_envelope).transpose()?;

    Ok(MatrixBounds {
        estimate,
        harmonic,
        arithmetic,
        lower,
        upper,
        cramer_rao,
        canonical_envelope,
        envelope,
    })
}

/// `(min_i λ_min(A_i))·I` and `(max_i λ_max(A_i))·I`.
pub fn canonical_envelope(mats: &[SymmetricPD]) -> Envelope {
    let d = mats[0].dim();
    let (lo, hi) = mats
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| {
            let e = a.eigen();
            (lo.min(e.min()), hi.max(e.max()))
        });
    Envelope {
        lower: Matrix::identity(d).scale(lo),
        upper: Matrix::identity(d).scale(hi),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmhmOutcome {
    /// `Σ w_i^α a_i`
    pub lhs: f64,
    /// `[Σ w_i^β / a_i]⁻¹`
    pub rhs: f64,
    pub margin: Margin,
}

fn amhm_terms(w: &Weights, a: &[f64], p: f64, q: f64) -> AmhmOutcome {
    let lhs: f64 = w.iter().zip(a).map(|(w, a)| w.powf(p) * a).sum();
    let rhs = 1.0 / w.iter().zip(a).map(|(w, a)| w.powf(q) / a).sum::<f64>();
    AmhmOutcome {
        lhs,
        rhs,
        margin: Margin::new(lhs - rhs, 1e-12 * (lhs.abs() + rhs.abs())),
    }
}

/// `Σ w_i^α a_i ≥ [Σ w_i^β / a_i]⁻¹` for `α + β = 2`.
pub fn verify_amhm_general(case: &AmhmCase) -> AmhmOutcome {
    amhm_terms(case.weights(), case.values(), case.alpha(), case.beta())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianSumOutcome {
    /// `Σ w_i^{2α} a_i`
    pub lhs: f64,
    /// `1 / Σ w_i^{2β} / a_i`
    pub rhs: f64,
    pub margin: Margin,
    /// Margin of [`verify_amhm_general`] at exponents `(2α, 2β)`.
    pub amhm_margin: f64,
}

impl GaussianSumOutcome {
    /// Whether the two margin formulas agree bit for bit.
    pub fn consistent(&self) -> bool {
        self.margin.value.to_bits() == self.amhm_margin.to_bits()
    }
}

/// `Σ w_i^{2α} a_i ≥ 1 / Σ w_i^{2β}/a_i` for `α + β = 1`: the information
/// inequality for weighted sums evaluated on independent Gaussians, where
/// both sides are closed forms.
pub fn verify_gaussian_sum_closed_form(
    weights: &Weights,
    values: &[f64],
    alpha: f64,
) -> Result<GaussianSumOutcome> {
    let beta = 1.0 - alpha;
    let case = AmhmCase::new(2.0 * alpha, weights.clone(), values.to_vec())?;
    let amhm = verify_amhm_general(&case);

    let lhs: f64 = weights
        .iter()
        .zip(values)
        .map(|(w, a)| w.powf(2.0 * alpha) * a)
        .sum();
    let rhs = 1.0
        / weights
            .iter()
            .zip(values)
            .map(|(w, a)| w.powf(2.0 * beta) / a)
            .sum::<f64>();
    Ok(GaussianSumOutcome {
        lhs,
        rhs,
        margin: Margin::new(lhs - rhs, 1e-12 * (lhs.abs() + rhs.abs())),
        amhm_margin: amhm.margin.value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumInformationOutcome {
    /// Information in `Σ w_i^β X_i`.
    pub lhs: FisherEstimate<f64>,
    /// Informational mean of each summand.
    pub summand_information: Vec<FisherEstimate<f64>>,
    /// `Σ w_i^{2α} I(X_i)`
    pub rhs: f64,
    pub margin: Margin,
    /// `1 / Σ w_i^{2β} σ_i²` when every summand is a single Gaussian.
    pub closed_form: Option<f64>,
}

/// `I(Σ w_i^β X_i) ≤ Σ w_i^{2α} I(X_i)` with `β = 1 − α`.
///
/// The left side is the informational mean of the exact convolution of the
/// summands. Tolerance is ten times the sum of all quadrature error bounds.
pub fn verify_sum_information(
    case: &SumInformationCase,
    cfg: &QuadratureConfig,
) -> Result<SumInformationOutcome> {
    let coeffs = case.coefficients();
    let lhs = info_of_weighted_sum(case.summands(), &coeffs, cfg)?;
    let summand_information = case
        .summands()
        .iter()
        .map(|m| quadrature_information(m, cfg))
        .collect::<Result<Vec<_>>>()?;
    let two_alpha = 2.0 * case.alpha();
    let rhs: f64 = case
        .weights()
        .iter()
        .zip(&summand_information)
        .map(|(w, i)| w.powf(two_alpha) * i.value)
        .sum();
    let tol = 10.0
        * (lhs.error_bound
            + summand_information
                .iter()
                .map(|i| i.error_bound)
                .sum::<f64>());
    let closed_form = case.summands().iter().all(|m| m.len() == 1).then(|| {
        1.0 / case
            .summands()
            .iter()
            .zip(&coeffs)
            .map(|(m, c)| c * c / m.precisions()[0])
            .sum::<f64>()
    });
    Ok(SumInformationOutcome {
        margin: Margin::new(rhs - lhs.value, tol),
        lhs,
        summand_information,
        rhs,
        closed_form,
    })
}

/// `1e-9 · (1 + ‖A‖_max + ‖B‖_max)`
fn structural_atol(a: &Matrix, b: &Matrix) -> f64 {
    1e-9 * (1.0 + a.max_abs() + b.max_abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperconvexOutcome {
    /// `Σ B_iᵀ A_i² B_i` compared against `S²` (expected `GEQ`).
    pub square: LoewnerResult,
    /// `Σ B_iᵀ A_i⁻¹ B_i` compared against `S⁻¹` (expected `GEQ`).
    pub inverse: LoewnerResult,
}

impl HyperconvexOutcome {
    pub fn margins(&self) -> [Margin; 2] {
        [
            Margin::from_geq(&self.square),
            Margin::from_geq(&self.inverse),
        ]
    }
}

/// With `S = Σ B_iᵀ A_i B_i`: `S² ≤ Σ B_iᵀ A_i² B_i` and
/// `S⁻¹ ≤ Σ B_iᵀ A_i⁻¹ B_i`.
pub fn verify_hyperconvexity(inst: &HyperconvexInstance) -> Result<HyperconvexOutcome> {
    let d = inst.dim();
    let mut s = Matrix::zeros(d);
    let mut sq = Matrix::zeros(d);
    let mut inv = Matrix::zeros(d);
    for (a, b) in inst.matrices().iter().zip(inst.weight_matrices()) {
        let am = a.matrix();
        s = s.add(&am.congruence(b));
        sq = sq.add(&am.matmul(am).symmetrized().congruence(b));
        inv = inv.add(&pd_inverse(a)?.matrix().congruence(b));
    }
    let s_pd = SymmetricPD::new(s.symmetrized())?;
    let s_sq = s_pd.matrix().matmul(s_pd.matrix()).symmetrized();
    let s_inv = pd_inverse(&s_pd)?.matrix().clone();
    Ok(HyperconvexOutcome {
        square: loewner_compare(&sq, &s_sq, structural_atol(&sq, &s_sq)),
        inverse: loewner_compare(&inv, &s_inv, structural_atol(&inv, &s_inv)),
    })
}

/// `A ≥ B > 0 ⇒ B⁻¹ ≥ A⁻¹`: compares `B⁻¹` against `A⁻¹`.
pub fn verify_inverse_monotonicity(pair: &OrderedPair) -> Result<LoewnerResult> {
    let a_inv = pd_inverse(&pair.greater)?.matrix().clone();
    let b_inv = pd_inverse(&pair.lesser)?.matrix().clone();
    Ok(loewner_compare(
        &b_inv,
        &a_inv,
        structural_atol(&b_inv, &a_inv),
    ))
}
