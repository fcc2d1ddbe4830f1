//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The panel with the largest error estimate is bisected until the summed
//! error estimate drops below the requested tolerance or the panel budget is
//! spent. Error estimates follow the QUADPACK rescaling of `|K15 − G7|`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        *slot = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let (value, abs_sum, asc) = (kronrod * half, abs_sum * half.abs(), asc * half.abs());
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    Panel { a, b, value, error }
}

/// Integrates `f` over the panels delimited by `breakpoints` (sorted,
/// at least two entries) until the estimated absolute error is below
/// `max(abs_tol, rel_tol · |value|)`.
///
/// On failure the error carries the best estimate reached.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<Integral> {
    if breakpoints.len() < 2
        || breakpoints
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
    {
        return Err(Error::invalid(
            "breakpoints",
            "need at least two increasing breakpoints",
        ));
    }
    let mut heap: BinaryHeap<Panel> = breakpoints
        .windows(2)
        .map(|w| gauss_kronrod(&f, w[0], w[1]))
        .collect();
    let total = |heap: &BinaryHeap<Panel>| {
        heap.iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
    };

    loop {
        let (value, error) = total(&heap);
        if !(value.is_finite() && error.is_finite()) {
            return Err(Error::Accuracy {
                best_estimate: value,
                error_estimate: error,
                subdivisions: heap.len(),
            });
        }
        let tol = abs_tol.max(rel_tol * value.abs());
        if error <= tol {
            return Ok(Integral {
                value,
                abs_error: error,
                panels: heap.len(),
            });
        }
        let worst = *heap.peek().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let exhausted = heap.len() >= max_panels;
        let unresolvable = !(worst.a < mid && mid < worst.b);
        if exhausted || unresolvable {
            return Err(Error::Accuracy {
                best_estimate: value,
                error_estimate: error,
                subdivisions: heap.len(),
            });
        }
        heap.pop();
        heap.push(gauss_kronrod(&f, worst.a, mid));
        heap.push(gauss_kronrod(&f, mid, worst.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(
            |x| x.powi(5) - 3.0 * x * x + 1.0,
            &[0.0, 2.0],
            1e-12,
            0.0,
            10,
        )
        .unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0 + 2.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_mass() {
        let r = integrate(
            |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            &[-12.0, 0.0, 12.0],
            1e-12,
            0.0,
            200,
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-13);
        assert!(r.abs_error <= 1e-12);
    }

    #[test]
    fn sharp_peak_needs_subdivision() {
        let eps: f64 = 1e-3;
        let r = integrate(
            |x| eps / (x * x + eps * eps),
            &[-1.0, 1.0],
            1e-10,
            0.0,
            2000,
        )
        .unwrap();
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((r.value - exact).abs() < 1e-9 * exact);
        assert!(r.panels > 2);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let err = integrate(|x: f64| x.sqrt().recip(), &[0.0, 1.0], 1e-14, 0.0, 4).unwrap_err();
        assert!(matches!(
            err,
            Error::Accuracy {
                subdivisions: 4,
                ..
            }
        ));
        let err = integrate(
            |x: f64| x.abs().sqrt().recip(),
            &[-1.0, 1.0],
            1e-8,
            0.0,
            100,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(integrate(|x| x, &[1.0], 1e-8, 0.0, 10).is_err());
        assert!(integrate(|x| x, &[1.0, 0.0], 1e-8, 0.0, 10).is_err());
    }
}
