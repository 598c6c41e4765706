//! Numeric transformation oracles: involution matrices, eta and Weber
//! transformation laws, theta lattice sums against the triple-product
//! closed form, the dual / translation / composite laws of both
//! vector-valued families, the two theta expansion lemmas, and the
//! cross-module identities tying components to Nahm sums.

use nahmforge_core::transforms::{
    build_s, build_s_tilde, check_dual_transform, check_group_composites, check_translations,
    component_vs_nahm_residual, eval_component, eval_eta_weber, eval_theta_numeric,
    half_period_vs_nahm_residual, involution_defect, theta_inversion_residual,
    theta_quarter_residual, ComponentKind, ThetaKind, TransformFamily, WeberFunction,
    DEFAULT_TERMS,
};
use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn qp(tau: C, alpha: f64) -> C {
    (c(0.0, 2.0 * PI) * tau * alpha).exp()
}

const TOL: f64 = 1e-8;

#[test]
fn s_matrices_are_involutions_up_to_rank_twelve() {
    for r in 2..=12 {
        assert!(involution_defect(&build_s(r)) < 1e-12, "S at r={r}");
        assert!(involution_defect(&build_s_tilde(r)) < 1e-12, "S~ at r={r}");
    }
}

#[test]
fn eta_and_weber_transformation_laws() {
    let terms = DEFAULT_TERMS;
    let eta = |tau| eval_eta_weber(WeberFunction::Eta, tau, terms).unwrap();
    let f = |tau| eval_eta_weber(WeberFunction::F, tau, terms).unwrap();
    let f1 = |tau| eval_eta_weber(WeberFunction::F1, tau, terms).unwrap();
    let f2 = |tau| eval_eta_weber(WeberFunction::F2, tau, terms).unwrap();

    // classical special value at tau = i
    let v = eta(c(0.0, 1.0));
    assert!((v.re - 0.7682254223260566).abs() < 1e-12 && v.im.abs() < 1e-14);

    for tau in [c(0.0, 1.0), c(0.3, 1.1), c(-0.4, 0.8)] {
        let inv = -c(1.0, 0.0) / tau;
        let root = (c(0.0, -1.0) * tau).sqrt();
        assert!((eta(inv) - root * eta(tau)).norm() < 1e-10, "eta inversion");
        let shift = tau + c(1.0, 0.0);
        assert!(
            (eta(shift) - c(0.0, PI / 12.0).exp() * eta(tau)).norm() < 1e-10,
            "eta translation"
        );

        // Weber inversions (in the normalization without the sqrt(2) in f2)
        assert!((f(inv) - f(tau)).norm() < 1e-10);
        assert!((f1(inv) - 2.0f64.sqrt() * f2(tau)).norm() < 1e-10);
        assert!((f2(inv) - f1(tau) / 2.0f64.sqrt()).norm() < 1e-10);

        // Weber translations
        assert!((f(shift) - c(0.0, -PI / 24.0).exp() * f1(tau)).norm() < 1e-10);
        assert!((f1(shift) - c(0.0, -PI / 24.0).exp() * f(tau)).norm() < 1e-10);
        assert!((f2(shift) - c(0.0, PI / 12.0).exp() * f2(tau)).norm() < 1e-10);

        // product relation: f f1 f2 = 1 in this normalization
        assert!((f(tau) * f1(tau) * f2(tau) - c(1.0, 0.0)).norm() < 1e-10);
    }
}

/// Triple-product closed forms for the two theta lattice sums (independent
/// of the production lattice-summation code path).
fn theta_h_jtp(j: f64, m: f64, tau: C, factors: usize) -> C {
    let mut acc = qp(tau, j * j / (4.0 * m));
    for n in 1..=factors {
        let nf = n as f64;
        acc *= (c(1.0, 0.0) - qp(tau, 2.0 * m * nf))
            * (c(1.0, 0.0) + qp(tau, m * (2.0 * nf - 1.0) + j))
            * (c(1.0, 0.0) + qp(tau, m * (2.0 * nf - 1.0) - j));
    }
    acc
}

fn theta_g_jtp(j: f64, m: f64, tau: C, factors: usize) -> C {
    let mut acc = qp(tau, j * j / (4.0 * m));
    for n in 1..=factors {
        let nf = n as f64;
        acc *= (c(1.0, 0.0) - qp(tau, 2.0 * m * nf))
            * (c(1.0, 0.0) - qp(tau, m * (2.0 * nf - 1.0) + j))
            * (c(1.0, 0.0) - qp(tau, m * (2.0 * nf - 1.0) - j));
    }
    acc
}

#[test]
fn theta_lattice_sums_match_triple_products() {
    let cases = [
        (1.0, 1.5, c(0.0, 1.1)),
        (2.0, 2.5, c(0.2, 0.9)),
        (0.5, 3.5, c(-0.3, 0.7)),
        (3.0, 7.0, c(0.1, 0.5)),
    ];
    for (j, m, tau) in cases {
        let h = eval_theta_numeric(ThetaKind::H, j, m, tau, DEFAULT_TERMS).unwrap();
        assert!((h - theta_h_jtp(j, m, tau, 200)).norm() < 1e-11, "h j={j} m={m}");
        let g = eval_theta_numeric(ThetaKind::G, j, m, tau, DEFAULT_TERMS).unwrap();
        assert!((g - theta_g_jtp(j, m, tau, 200)).norm() < 1e-11, "g j={j} m={m}");
    }
}

#[test]
fn theta_reflection_and_period_symmetries() {
    let tau = c(0.15, 0.8);
    for (j, m) in [(1.0, 2.0), (1.5, 3.5), (2.0, 4.5)] {
        let h = |jj| eval_theta_numeric(ThetaKind::H, jj, m, tau, DEFAULT_TERMS).unwrap();
        let g = |jj| eval_theta_numeric(ThetaKind::G, jj, m, tau, DEFAULT_TERMS).unwrap();
        assert!((h(j) - h(-j)).norm() < 1e-12);
        assert!((h(j) - h(2.0 * m + j)).norm() < 1e-12);
        assert!((g(j) - g(-j)).norm() < 1e-12);
        assert!((g(j) + g(2.0 * m + j)).norm() < 1e-12);
        // splitting onto the refined lattice
        let h4 = |jj| eval_theta_numeric(ThetaKind::H, jj, 4.0 * m, tau, DEFAULT_TERMS).unwrap();
        assert!((h(j) - (h4(2.0 * j) + h4(4.0 * m - 2.0 * j))).norm() < 1e-12);
        assert!((g(j) - (h4(2.0 * j) - h4(4.0 * m - 2.0 * j))).norm() < 1e-12);
        // doubling the argument halves the lattice spacing
        let hh = eval_theta_numeric(ThetaKind::H, 2.0 * j, 2.0 * m, tau, DEFAULT_TERMS).unwrap();
        let h2tau = eval_theta_numeric(ThetaKind::H, j, m, 2.0 * tau, DEFAULT_TERMS).unwrap();
        assert!((h2tau - hh).norm() < 1e-12);
    }
}

#[test]
fn dual_transforms_hold_at_sample_points() {
    let fixed = c(0.0, 1.0 / 2.0f64.sqrt()); // fixed point of tau -> -1/(2 tau)
    let samples = [fixed, c(0.0, 1.0), c(0.3, 1.1), c(-0.2, 0.8), c(0.45, 0.65)];
    for family in [TransformFamily::G, TransformFamily::H] {
        for r in 2..=4 {
            for tau in samples {
                let report = check_dual_transform(family, r, tau, DEFAULT_TERMS, TOL).unwrap();
                assert!(
                    report.pass,
                    "{family} r={r} tau={tau}: {:?}",
                    report.residuals
                );
            }
        }
    }
}

#[test]
fn translation_laws_hold() {
    for family in [TransformFamily::G, TransformFamily::H] {
        for r in 2..=4 {
            for tau in [c(0.0, 1.0), c(0.25, 0.9)] {
                let report = check_translations(family, r, tau, DEFAULT_TERMS, TOL).unwrap();
                assert!(
                    report.pass,
                    "{family} r={r} tau={tau}: {:?}",
                    report.residuals
                );
                if family == TransformFamily::G && r % 2 == 1 {
                    assert!(report.residuals.contains_key("vee_single_step"));
                }
            }
        }
    }
}

#[test]
fn composite_generator_laws_hold() {
    for (family, r) in [
        (TransformFamily::G, 2),
        (TransformFamily::G, 3),
        (TransformFamily::H, 2),
        (TransformFamily::H, 3),
    ] {
        let tau = c(0.0, 2.0);
        // the H-side lower generator maps 2i close to the real line, so
        // its products need more factors to converge
        let terms = match family {
            TransformFamily::G => DEFAULT_TERMS,
            TransformFamily::H => 1600,
        };
        let report = check_group_composites(family, r, tau, terms, TOL).unwrap();
        assert!(
            report.pass,
            "{family} r={r}: {:?}",
            report.residuals
        );
        if family == TransformFamily::G && r == 3 {
            assert!(report.residuals.contains_key("odd_lower_generator"));
        }
    }
}

#[test]
fn report_serializes_expected_shape() {
    let report =
        check_dual_transform(TransformFamily::G, 2, c(0.0, 1.0), DEFAULT_TERMS, TOL).unwrap();
    let v = report.to_json();
    assert_eq!(v["family"], "G");
    assert_eq!(v["r"], 2);
    assert_eq!(v["tau"][1], 1.0);
    assert_eq!(v["pass"], true);
    assert!(v["residuals"].as_object().unwrap().len() == 2);
}

#[test]
fn theta_inversion_lemma_spot_checks() {
    assert!(theta_inversion_residual(1, 3.5, c(0.0, 0.8), DEFAULT_TERMS).unwrap() < TOL);
    assert!(theta_inversion_residual(2, 3.0, c(0.3, 1.0), DEFAULT_TERMS).unwrap() < TOL);
    assert!(theta_inversion_residual(3, 2.5, c(-0.2, 0.9), DEFAULT_TERMS).unwrap() < TOL);
}

#[test]
fn theta_quarter_period_lemma_spot_checks() {
    // m = 7 corresponds to rank 2; 4 * 2 = 8 = 1 mod 7
    for j in [1, 3, 5, 7] {
        let res = theta_quarter_residual(j, 7, 2, c(0.0, 0.9), DEFAULT_TERMS).unwrap();
        assert!(res < TOL, "j={j}: residual {res}");
    }
    // m = 11 corresponds to rank 3; 4 * 3 = 12 = 1 mod 11
    for j in [1, 5, 9] {
        let res = theta_quarter_residual(j, 11, 3, c(0.1, 0.8), DEFAULT_TERMS).unwrap();
        assert!(res < TOL, "j={j}: residual {res}");
    }
}

#[test]
fn vee_components_match_nahm_sums() {
    for tau in [c(0.0, 1.0), c(0.3, 0.9)] {
        for r in 2usize..=3 {
            for j in [1usize].into_iter().chain(r..=2 * r - 1) {
                let res =
                    component_vs_nahm_residual(TransformFamily::G, r, j, tau, DEFAULT_TERMS, 60)
                        .unwrap();
                assert!(res < TOL, "G r={r} j={j} tau={tau}: {res}");
            }
            for j in [1usize].into_iter().chain(r - 1..=2 * r - 2) {
                let res =
                    component_vs_nahm_residual(TransformFamily::H, r, j, tau, DEFAULT_TERMS, 60)
                        .unwrap();
                assert!(res < TOL, "H r={r} j={j} tau={tau}: {res}");
            }
        }
    }
}

#[test]
fn plain_components_match_half_period_nahm_combinations() {
    for sigma in [c(0.0, 2.0), c(0.6, 1.8)] {
        for r in 2usize..=3 {
            for j in (2..=2 * r - 2).step_by(2).chain([2 * r - 1]) {
                let res =
                    half_period_vs_nahm_residual(TransformFamily::G, r, j, sigma, DEFAULT_TERMS, 60)
                        .unwrap();
                assert!(res < TOL, "G r={r} j={j} sigma={sigma}: {res}");
            }
            for j in (1..=2 * r - 3).step_by(2).chain([2 * r - 2]) {
                let res =
                    half_period_vs_nahm_residual(TransformFamily::H, r, j, sigma, DEFAULT_TERMS, 60)
                        .unwrap();
                assert!(res < TOL, "H r={r} j={j} sigma={sigma}: {res}");
            }
        }
    }
}

#[test]
fn leading_behavior_of_vanishing_components() {
    // for indices 2, 3 mod 4 the two summands of a plain G component cancel
    // at leading order, so the value is much smaller than the generic one
    let tau = c(0.0, 2.5);
    let small = eval_component(TransformFamily::G, ComponentKind::Plain, 4, 2, tau, DEFAULT_TERMS)
        .unwrap()
        .norm();
    let big = eval_component(TransformFamily::G, ComponentKind::Plain, 4, 1, tau, DEFAULT_TERMS)
        .unwrap()
        .norm();
    assert!(small < 1e-2 * big, "small={small} big={big}");
}
