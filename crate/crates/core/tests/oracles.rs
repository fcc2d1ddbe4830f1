mod common;

use common::{mc_information_2d, rotated_diag_1_4, trapezoid_default, trapezoid_variance};
use infomean::inequality::{
    generate_instance, verify_matrix_bounds, verify_scalar_bounds, verify_sum_information,
    GeneratorConfig, Instance, InstanceKind, SumInformationCase,
};
use infomean::quadrature::integrate;
use infomean::{
    convolve_weighted_sum, info_of_weighted_sum, informational_mean_matrix,
    informational_mean_scalar, weighted_mean, MatrixMixture, MeanKind, MonteCarloConfig,
    QuadratureConfig, ScalarMixture, SymmetricPD, Weights,
};

fn sm(w: &[f64], a: &[f64]) -> ScalarMixture {
    ScalarMixture::new(Weights::new(w.to_vec()).unwrap(), a.to_vec()).unwrap()
}

#[test]
fn quadrature_agrees_with_trapezoid_on_the_reference_pair() {
    let cfg = QuadratureConfig::default();
    let q = informational_mean_scalar(&sm(&[0.5, 0.5], &[1.0, 4.0]), &cfg)
        .unwrap()
        .value;
    let t = trapezoid_default(&[0.5, 0.5], &[1.0, 4.0]);
    assert!((q - t).abs() < 1e-7, "quadrature {q}, trapezoid {t}");
    assert!(q > 1.6 && q < 2.5);
}

#[test]
fn quadrature_agrees_with_trapezoid_on_generated_mixtures() {
    let cfg = QuadratureConfig::default();
    let gen = GeneratorConfig::for_kind(InstanceKind::ScalarMixture);
    for seed in 0..25 {
        let Instance::ScalarMixture(m) =
            generate_instance(InstanceKind::ScalarMixture, &gen, seed).unwrap()
        else {
            unreachable!()
        };
        let q = informational_mean_scalar(&m, &cfg).unwrap().value;
        // step 1e-4·σ_max leaves the narrowest component under-resolved when
        // precisions differ by 10⁴; refine the grid for those
        let a_max = m.precisions().iter().copied().fold(0.0, f64::max);
        let sigma_max = m.sigma_max().max(1.0);
        let h = (1e-4 * sigma_max).min(0.02 / a_max.sqrt());
        let t = common::trapezoid_information(
            m.weights().as_slice(),
            m.precisions(),
            12.0 * sigma_max,
            h,
        );
        assert!(
            (q - t).abs() < 1e-7 * q.max(1.0),
            "seed {seed}: quadrature {q}, trapezoid {t}"
        );
    }
}

#[test]
fn scalar_bound_margins_match_trapezoid() {
    let b =
        verify_scalar_bounds(&sm(&[0.5, 0.5], &[1.0, 4.0]), &QuadratureConfig::default()).unwrap();
    let t = trapezoid_default(&[0.5, 0.5], &[1.0, 4.0]);
    assert!((b.lower.value - (t - 1.6)).abs() < 1e-7);
    assert!((b.upper.value - (2.5 - t)).abs() < 1e-7);
    assert!(b.lower.value > 0.0 && b.upper.value > 0.0);
}

#[test]
fn sum_information_agrees_with_trapezoid() {
    let cfg = QuadratureConfig::default();
    let x1 = sm(&[0.3, 0.7], &[0.5, 6.0]);
    let x2 = sm(&[0.6, 0.4], &[2.0, 0.2]);
    for alpha in [0.3, 0.5, 0.7] {
        let case = SumInformationCase::new(
            alpha,
            Weights::new(vec![0.35, 0.65]).unwrap(),
            vec![x1.clone(), x2.clone()],
        )
        .unwrap();
        let out = verify_sum_information(&case, &cfg).unwrap();
        let sum = convolve_weighted_sum(case.summands(), &case.coefficients()).unwrap();
        let t = trapezoid_default(sum.weights().as_slice(), sum.precisions());
        assert!(
            (out.lhs.value - t).abs() < 1e-7,
            "alpha {alpha}: {} vs {t}",
            out.lhs.value
        );
        let rhs: f64 = [(0.35, &x1), (0.65, &x2)]
            .iter()
            .map(|(w, x)| {
                f64::powf(*w, 2.0 * alpha)
                    * trapezoid_default(x.weights().as_slice(), x.precisions())
            })
            .sum();
        assert!((out.rhs - rhs).abs() < 1e-7);
        assert!(out.margin.value >= -out.margin.tolerance);
    }
}

#[test]
fn weighted_sum_of_mixtures_lies_within_its_own_bounds() {
    let cfg = QuadratureConfig::default();
    let ms = [sm(&[0.5, 0.5], &[1.0, 4.0]), sm(&[0.2, 0.8], &[0.3, 3.0])];
    let est = info_of_weighted_sum(&ms, &[0.5, 0.5], &cfg).unwrap();
    let sum = convolve_weighted_sum(&ms, &[0.5, 0.5]).unwrap();
    assert_eq!(sum.len(), 4);
    let h = weighted_mean(MeanKind::Harmonic, sum.weights(), sum.precisions()).unwrap();
    let a = weighted_mean(MeanKind::Arithmetic, sum.weights(), sum.precisions()).unwrap();
    assert!(h < est.value && est.value < a);
}

#[test]
fn convolution_variance_is_additive() {
    let m1 = sm(&[0.25, 0.75], &[1.0, 9.0]);
    let m2 = sm(&[0.6, 0.4], &[0.5, 2.0]);
    let sum = convolve_weighted_sum(&[m1.clone(), m2.clone()], &[0.6, 0.8]).unwrap();
    assert_eq!(sum.len(), 4);
    let expected = 0.36 * m1.variance() + 0.64 * m2.variance();
    let upper = 14.0 * sum.sigma_max();
    let q = integrate(
        |x| x * x * sum.density(x),
        &[-upper, 0.0, upper],
        1e-13,
        0.0,
        2000,
    )
    .unwrap();
    assert!(
        (q.value - expected).abs() < 1e-10,
        "{} vs {expected}",
        q.value
    );
    let t = trapezoid_variance(sum.weights().as_slice(), sum.precisions());
    assert!((t - expected).abs() < 1e-10);
}

#[test]
fn rotated_instance_matches_independent_sampler() {
    let a1 = SymmetricPD::from_diagonal(&[1.0, 4.0]).unwrap();
    let r = rotated_diag_1_4();
    let a2 =
        SymmetricPD::new(infomean::Matrix::from_rows(&[r[0].to_vec(), r[1].to_vec()]).unwrap())
            .unwrap();
    let m = MatrixMixture::new(Weights::uniform(2).unwrap(), vec![a1, a2]).unwrap();

    let cfg = MonteCarloConfig::new(2024).with_samples(10_000_000);
    let est = informational_mean_matrix(&m, &cfg).unwrap();
    let se = est.standard_errors.as_ref().unwrap();
    let (oracle, oracle_se) =
        mc_information_2d(&[0.5, 0.5], &[[[1.0, 0.0], [0.0, 4.0]], r], 10_000_000, 99);
    for i in 0..2 {
        for j in 0..2 {
            let combined = (se[(i, j)].powi(2) + oracle_se[i][j].powi(2)).sqrt();
            let diff = (est.value[(i, j)] - oracle[i][j]).abs();
            assert!(
                diff <= 4.0 * combined,
                "entry ({i},{j}): {} vs {}, 4·SE {}",
                est.value[(i, j)],
                oracle[i][j],
                4.0 * combined
            );
        }
    }

    let bounds = verify_matrix_bounds(&m, &cfg, None).unwrap();
    assert!(bounds.lower.is_geq() && bounds.upper.is_geq(), "{bounds:?}");
}

#[test]
fn sample_covariance_matches_mixture_covariance() {
    let gen = GeneratorConfig::for_kind(InstanceKind::MatrixMixture).with_shape(Some(3), Some(3));
    let Instance::MatrixMixture(m) =
        generate_instance(InstanceKind::MatrixMixture, &gen, 5).unwrap()
    else {
        unreachable!()
    };
    let n = 1_000_000;
    let draws = m.sample(n, 17, 0);
    let d = m.dim();
    let cov = m.covariance().unwrap();
    for i in 0..d {
        for j in i..d {
            let prods: Vec<f64> = draws.iter().map(|s| s.point[i] * s.point[j]).collect();
            let mean = prods.iter().sum::<f64>() / n as f64;
            let var = prods.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (var / n as f64).sqrt();
            assert!(
                (mean - cov.matrix()[(i, j)]).abs() <= 4.0 * se,
                "({i},{j}): {mean} vs {}",
                cov.matrix()[(i, j)]
            );
        }
    }
}
