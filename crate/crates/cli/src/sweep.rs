use std::fmt::Write as _;

use infomean::{
    informational_mean_scalar, weighted_mean, MeanKind, QuadratureConfig, ScalarMixture, Weights,
};

use crate::CliError;

pub const HEADER: &str = "w,informational,arithmetic,geometric,harmonic";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub w: f64,
    pub informational: f64,
    pub arithmetic: f64,
    pub geometric: f64,
    pub harmonic: f64,
}

/// Weights for grid point `w`: `w` on the first precision, the rest split
/// evenly among the others.
fn grid_weights(w: f64, n: usize) -> Result<Weights, infomean::Error> {
    let rest = (1.0 - w) / (n - 1) as f64;
    let mut raw = vec![rest; n];
    raw[0] = w;
    Weights::normalized(&raw)
}

/// `grid` rows at `w = k/(grid+1)`, `k = 1..=grid`.
pub fn sweep(
    precisions: &[f64],
    grid: usize,
    cfg: &QuadratureConfig,
) -> Result<Vec<SweepRow>, CliError> {
    if precisions.len() < 2 {
        return Err(CliError::Validation(
            "--a needs at least two precisions".into(),
        ));
    }
    if grid < 2 {
        return Err(CliError::Validation("--grid must be at least 2".into()));
    }
    (1..=grid)
        .map(|k| {
            let w = k as f64 / (grid + 1) as f64;
            let weights = grid_weights(w, precisions.len())?;
            let m = ScalarMixture::new(weights.clone(), precisions.to_vec())?;
            // the estimator itself rejects values outside [harmonic, arithmetic]
            let info = informational_mean_scalar(&m, cfg)?;
            Ok(SweepRow {
                w,
                informational: info.value,
                arithmetic: weighted_mean(MeanKind::Arithmetic, &weights, precisions)?,
                geometric: weighted_mean(MeanKind::Geometric, &weights, precisions)?,
                harmonic: weighted_mean(MeanKind::Harmonic, &weights, precisions)?,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        let cells =
            [r.w, r.informational, r.arithmetic, r.geometric, r.harmonic].map(|v| format_g(v, 12));
        writeln!(out, "{}", cells.join(",")).expect("writing to a String");
    }
    out
}

/// C-style `%.{digits}g`.
pub fn format_g(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
