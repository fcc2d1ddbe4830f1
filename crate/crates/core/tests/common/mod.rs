//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerics: densities are summed directly, integrals use
//! the plain trapezoid rule, and sampling uses a different generator.

#![allow(dead_code)]

use std::f64::consts::PI;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

/// `∫ p′²/p` for `p = Σ w_i N(0, 1/a_i)` by the trapezoid rule with step `h`
/// over `[−half_width, half_width]`.
pub fn trapezoid_information(w: &[f64], a: &[f64], half_width: f64, h: f64) -> f64 {
    let n = (2.0 * half_width / h).round() as usize;
    let mut total = 0.0;
    for k in 0..=n {
        let x = -half_width + k as f64 * h;
        let (mut p, mut dp) = (0.0, 0.0);
        for (wi, ai) in w.iter().zip(a) {
            let phi = wi * (ai / (2.0 * PI)).sqrt() * (-0.5 * ai * x * x).exp();
            p += phi;
            dp -= phi * ai * x;
        }
        let f = if p > 0.0 { dp * dp / p } else { 0.0 };
        total += if k == 0 || k == n { 0.5 * f } else { f };
    }
    total * h
}

/// Trapezoid oracle on `[−12, 12]` with step `1e-4`, stretched by `σ_max`
/// when components are wider than unit scale.
pub fn trapezoid_default(w: &[f64], a: &[f64]) -> f64 {
    let sigma_max = a.iter().map(|a| a.sqrt().recip()).fold(1.0, f64::max);
    trapezoid_information(w, a, 12.0 * sigma_max, 1e-4 * sigma_max)
}

/// `∫ x² p(x) dx` by the trapezoid rule.
pub fn trapezoid_variance(w: &[f64], a: &[f64]) -> f64 {
    let sigma_max = a.iter().map(|a| a.sqrt().recip()).fold(0.0, f64::max);
    let (half_width, h) = (14.0 * sigma_max, 1e-4 * sigma_max);
    let n = (2.0 * half_width / h).round() as usize;
    let mut total = 0.0;
    for k in 0..=n {
        let x = -half_width + k as f64 * h;
        let p: f64 = w
            .iter()
            .zip(a)
            .map(|(wi, ai)| wi * (ai / (2.0 * PI)).sqrt() * (-0.5 * ai * x * x).exp())
            .sum();
        let f = x * x * p;
        total += if k == 0 || k == n { 0.5 * f } else { f };
    }
    total * h
}

pub type M2 = [[f64; 2]; 2];

fn inv2(a: &M2) -> M2 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ]
}

/// Lower Cholesky factor of a 2×2 SPD matrix.
fn chol2(v: &M2) -> M2 {
    let l00 = v[0][0].sqrt();
    let l10 = v[1][0] / l00;
    let l11 = (v[1][1] - l10 * l10).sqrt();
    [[l00, 0.0], [l10, l11]]
}

/// Monte Carlo information matrix of a bivariate scale mixture with
/// precision matrices `a`, sampled with `SmallRng` and Box–Muller.
/// Returns the mean of `s sᵀ` and its i.i.d. standard errors.
pub fn mc_information_2d(w: &[f64], a: &[M2], n: usize, seed: u64) -> (M2, M2) {
    let mut rng = SmallRng::seed_from_u64(seed);
    let covs: Vec<M2> = a.iter().map(inv2).collect();
    let chols: Vec<M2> = covs.iter().map(chol2).collect();
    let dets: Vec<f64> = a
        .iter()
        .map(|m| m[0][0] * m[1][1] - m[0][1] * m[1][0])
        .collect();
    let mut sum = [[0.0; 2]; 2];
    let mut sum_sq = [[0.0; 2]; 2];
    for _ in 0..n {
        let u: f64 = rng.random();
        let mut i = 0;
        let mut acc = w[0];
        while u >= acc && i + 1 < w.len() {
            i += 1;
            acc += w[i];
        }
        let (u1, u2): (f64, f64) = (1.0 - rng.random::<f64>(), rng.random());
        let r = (-2.0 * u1.ln()).sqrt();
        let z = [r * (2.0 * PI * u2).cos(), r * (2.0 * PI * u2).sin()];
        let l = chols[i];
        let x = [l[0][0] * z[0], l[1][0] * z[0] + l[1][1] * z[1]];

        let mut dens = Vec::with_capacity(w.len());
        for (k, m) in a.iter().enumerate() {
            let q =
                x[0] * (m[0][0] * x[0] + m[0][1] * x[1]) + x[1] * (m[1][0] * x[0] + m[1][1] * x[1]);
            dens.push(w[k] * dets[k].sqrt() / (2.0 * PI) * (-0.5 * q).exp());
        }
        let p: f64 = dens.iter().sum();
        let mut s = [0.0; 2];
        for (k, m) in a.iter().enumerate() {
            let r = dens[k] / p;
            s[0] -= r * (m[0][0] * x[0] + m[0][1] * x[1]);
            s[1] -= r * (m[1][0] * x[0] + m[1][1] * x[1]);
        }
        for i in 0..2 {
            for j in 0..2 {
                let v = s[i] * s[j];
                sum[i][j] += v;
                sum_sq[i][j] += v * v;
            }
        }
    }
    let nf = n as f64;
    let mut mean = [[0.0; 2]; 2];
    let mut se = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            mean[i][j] = sum[i][j] / nf;
            let var = sum_sq[i][j] / nf - mean[i][j] * mean[i][j];
            se[i][j] = (var / nf).sqrt();
        }
    }
    (mean, se)
}

/// `R · diag(1, 4) · Rᵀ` with `R` the rotation by 45°.
pub fn rotated_diag_1_4() -> M2 {
    // R diag(1,4) Rᵀ = [[2.5, −1.5], [−1.5, 2.5]]
    [[2.5, -1.5], [-1.5, 2.5]]
}
