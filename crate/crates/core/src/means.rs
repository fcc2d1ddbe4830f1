//! Classical weighted means and the Loewner order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pd_inverse, sym_eigen, Matrix, SymmetricPD};
use crate::weights::Weights;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
}

/// Weighted arithmetic, geometric or harmonic mean of positive values.
pub fn weighted_mean(kind: MeanKind, w: &Weights, a: &[f64]) -> Result<f64> {
    check_values(w, a)?;
    let pairs = w.iter().zip(a);
    Ok(match kind {
        MeanKind::Arithmetic => pairs.map(|(w, a)| w * a).sum(),
        // log-domain so that extreme values do not overflow the product
        MeanKind::Geometric => pairs.map(|(w, a)| w * a.ln()).sum::<f64>().exp(),
        MeanKind::Harmonic => 1.0 / pairs.map(|(w, a)| w / a).sum::<f64>(),
    })
}

fn check_values(w: &Weights, a: &[f64]) -> Result<()> {
    if w.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: a.len(),
        });
    }
    if let Some(v) = a.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::invalid(
            "values",
            format!("{v} is not positive and finite"),
        ));
    }
    Ok(())
}

fn check_matrices(w: &Weights, mats: &[SymmetricPD]) -> Result<usize> {
    if w.len() != mats.len() {
        return Err(Error::DimensionMismatch {
            expected: w.len(),
            found: mats.len(),
        });
    }
    let d = mats[0].dim();
    if let Some(m) = mats.iter().find(|m| m.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: m.dim(),
        });
    }
    Ok(d)
}

/// `Σ w_i A_i`
pub fn matrix_arithmetic_mean(w: &Weights, mats: &[SymmetricPD]) -> Result<SymmetricPD> {
    let d = check_matrices(w, mats)?;
    let mut acc = Matrix::zeros(d);
    for (wi, a) in w.iter().zip(mats) {
        acc.add_scaled(*wi, a.matrix());
    }
    SymmetricPD::new(acc)
}

/// `[Σ w_i A_i⁻¹]⁻¹`
pub fn matrix_harmonic_mean(w: &Weights, mats: &[SymmetricPD]) -> Result<SymmetricPD> {
    let d = check_matrices(w, mats)?;
    let mut acc = Matrix::zeros(d);
    for (wi, a) in w.iter().zip(mats) {
        acc.add_scaled(*wi, pd_inverse(a)?.matrix());
    }
    pd_inverse(&SymmetricPD::new(acc)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Relation {
    Geq,
    Leq,
    Eq,
    Incomparable,
}

/// Outcome of comparing `A` and `B` in the Loewner order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoewnerResult {
    pub relation: Relation,
    /// Smallest eigenvalue of the difference in the asserted direction.
    /// For `Eq` the worse of the two directions; for `Incomparable` the
    /// better one (still below `-tolerance_used`).
    pub margin: f64,
    pub tolerance_used: f64,
    /// `λ_min(A − B)`
    pub min_eigenvalue: f64,
    /// `λ_max(A − B)`
    pub max_eigenvalue: f64,
}

impl LoewnerResult {
    /// `A ≥ B` within tolerance.
    pub fn is_geq(&self) -> bool {
        matches!(self.relation, Relation::Geq | Relation::Eq)
    }

    /// `A ≤ B` within tolerance.
    pub fn is_leq(&self) -> bool {
        matches!(self.relation, Relation::Leq | Relation::Eq)
    }

    /// `λ_min(A − B)`, the margin of the claim `A ≥ B`.
    pub fn geq_margin(&self) -> f64 {
        self.min_eigenvalue
    }

    /// `λ_min(B − A)`, the margin of the claim `A ≤ B`.
    pub fn leq_margin(&self) -> f64 {
        -self.max_eigenvalue
    }
}

/// Scale-aware default tolerance `1e-10 · (1 + ‖A‖_max + ‖B‖_max)`.
pub fn default_loewner_atol(a: &Matrix, b: &Matrix) -> f64 {
    1e-10 * (1.0 + a.max_abs() + b.max_abs())
}

/// Compares `A` and `B` through the eigenvalues of the symmetrized `A − B`.
pub fn loewner_compare(a: &Matrix, b: &Matrix, atol: f64) -> LoewnerResult {
    assert_eq!(a.dim(), b.dim(), "loewner_compare dimension mismatch");
    let eig = sym_eigen(&a.sub(b));
    let (lo, hi) = (eig.min(), eig.max());
    let geq = lo >= -atol;
    let leq = -hi >= -atol;
    let (relation, margin) = match (geq, leq) {
        (true, true) => (Relation::Eq, lo.min(-hi)),
        (true, false) => (Relation::Geq, lo),
        (false, true) => (Relation::Leq, -hi),
        (false, false) => (Relation::Incomparable, lo.max(-hi)),
    };
    LoewnerResult {
        relation,
        margin,
        tolerance_used: atol,
        min_eigenvalue: lo,
        max_eigenvalue: hi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[f64]) -> Weights {
        Weights::new(v.to_vec()).unwrap()
    }

    #[test]
    fn scalar_means() {
        let half = w(&[0.5, 0.5]);
        assert_eq!(
            weighted_mean(MeanKind::Arithmetic, &half, &[1.0, 4.0]).unwrap(),
            2.5
        );
        assert!(
            (weighted_mean(MeanKind::Harmonic, &half, &[1.0, 4.0]).unwrap() - 1.6).abs() < 1e-15
        );
        assert!(
            (weighted_mean(MeanKind::Geometric, &half, &[1.0, 4.0]).unwrap() - 2.0).abs() < 1e-15
        );
        assert!(weighted_mean(MeanKind::Arithmetic, &half, &[1.0]).is_err());
        assert!(weighted_mean(MeanKind::Arithmetic, &half, &[1.0, -1.0]).is_err());
    }

    #[test]
    fn matrix_means_single_and_diagonal() {
        let a = SymmetricPD::new(Matrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap())
            .unwrap();
        let one = w(&[1.0]);
        let am = matrix_arithmetic_mean(&one, std::slice::from_ref(&a)).unwrap();
        let hm = matrix_harmonic_mean(&one, std::slice::from_ref(&a)).unwrap();
        assert_eq!(am.matrix(), a.matrix());
        assert!(hm.matrix().sub(a.matrix()).max_abs() < 1e-14);

        let a1 = SymmetricPD::from_diagonal(&[1.0, 4.0]).unwrap();
        let a2 = SymmetricPD::from_diagonal(&[4.0, 1.0]).unwrap();
        let half = w(&[0.5, 0.5]);
        let am = matrix_arithmetic_mean(&half, &[a1.clone(), a2.clone()]).unwrap();
        let hm = matrix_harmonic_mean(&half, &[a1, a2]).unwrap();
        assert_eq!(am.matrix(), &Matrix::from_diagonal(&[2.5, 2.5]));
        assert!(
            hm.matrix()
                .sub(&Matrix::from_diagonal(&[1.6, 1.6]))
                .max_abs()
                < 1e-14
        );
    }

    #[test]
    fn loewner_examples() {
        let id = Matrix::identity(2);
        let r = loewner_compare(&Matrix::from_diagonal(&[2.0, 2.0]), &id, 1e-10);
        assert_eq!(r.relation, Relation::Geq);
        assert_eq!(r.margin, 1.0);

        let r = loewner_compare(&Matrix::from_diagonal(&[2.0, 0.5]), &id, 1e-10);
        assert_eq!(r.relation, Relation::Incomparable);
        assert!(r.margin < 0.0);

        let r = loewner_compare(&id, &id, 1e-10);
        assert_eq!(r.relation, Relation::Eq);
        assert_eq!(r.margin, 0.0);

        let r = loewner_compare(&id, &Matrix::from_diagonal(&[2.0, 3.0]), 1e-10);
        assert_eq!(r.relation, Relation::Leq);
        assert_eq!(r.margin, 1.0);
        assert!(r.is_leq() && !r.is_geq());
    }
}
