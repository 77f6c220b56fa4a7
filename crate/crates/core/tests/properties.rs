mod common;

use harmonic_classes::classes::{coefficient_deficiency, phi, psi};
use harmonic_classes::series::{
    apply_operator, derivatives, functional_e, functional_e_fd, jacobian, EvalPoint,
};
use harmonic_classes::specfn::gamma_ratio;
use harmonic_classes::structure::{convolve, decompose, reconstruct};
use harmonic_classes::verify::{case_seed, min_real_e, random_member, DiskGrid};
use harmonic_classes::{HarmonicFunction, NegativeCoefficientForm};
use num_complex::Complex64;
use rand::Rng;

#[test]
fn expansion_matches_weighted_double_sum() {
    let mut rng = common::rng(11);
    for _ in 0..200 {
        let f = common::random_general(&mut rng, 8);
        let p = common::random_params(&mut rng);
        let z = common::random_point(&mut rng, 0.05, 0.95);
        let zc = z.z();
        let mut sum = Complex64::default();
        for (&n, &a) in f.a() {
            sum += phi(n, &p).unwrap() * a * zc.powu(n - 1);
        }
        for (&n, &b) in f.b() {
            sum += psi(n, &p).unwrap() * b.conj() * zc.conj().powu(n) / zc;
        }
        let e = functional_e(&f, &p, &z).unwrap();
        assert!((e - 1.0 - sum).norm() <= 1e-12 * (1.0 + sum.norm()), "{e} vs {sum}");
    }
}

#[test]
fn operator_is_linear_and_scales_by_gamma_ratio() {
    let mut rng = common::rng(12);
    for _ in 0..100 {
        let f = common::random_general(&mut rng, 8);
        let g = common::random_general(&mut rng, 8);
        let nu = rng.gen_range(0.0..0.99);
        let lhs = apply_operator(&(&f + &g), nu).unwrap();
        let rhs = &apply_operator(&f, nu).unwrap() + &apply_operator(&g, nu).unwrap();
        for n in 1..=8 {
            assert!((lhs.a_coeff(n) - rhs.a_coeff(n)).norm() <= 1e-12);
            assert!((lhs.b_coeff(n) - rhs.b_coeff(n)).norm() <= 1e-12);
        }
        let of = apply_operator(&f, nu).unwrap();
        for (&n, &a) in f.a() {
            assert!((of.a_coeff(n) - a * gamma_ratio(n, nu).unwrap()).norm() <= 1e-14);
        }
    }
}

#[test]
fn jacobian_is_difference_of_squared_derivatives() {
    let mut rng = common::rng(13);
    for _ in 0..200 {
        let f = common::random_general(&mut rng, 6);
        let z = common::random_point(&mut rng, 0.0, 0.95);
        let (h1, g1) = derivatives(&f, &z);
        let j = jacobian(&f, &z);
        assert!((j - (h1.norm_sqr() - g1.norm_sqr())).abs() <= 1e-12 * (1.0 + h1.norm_sqr()));
    }
}

#[test]
fn convolution_is_commutative_and_associative() {
    let params = common::suite_params();
    for i in 0..100 {
        let p = &params[i % params.len()];
        let f: Vec<NegativeCoefficientForm> = (0..3)
            .map(|j| random_member(p, case_seed(1300 + j, i), 8, 0.5).unwrap())
            .collect();
        assert_eq!(convolve(&f[0], &f[1]), convolve(&f[1], &f[0]));
        let left = convolve(&convolve(&f[0], &f[1]), &f[2]);
        let right = convolve(&f[0], &convolve(&f[1], &f[2]));
        assert!(left.max_abs_diff(&right) <= 1e-15);
    }
}

#[test]
fn class_at_alpha_is_inside_class_at_beta() {
    let mut rng = common::rng(14);
    let params = common::suite_params();
    for i in 0..200 {
        let alpha = rng.gen_range(0.05..0.95);
        let beta = rng.gen_range(0.0..alpha);
        let at_alpha = params[i % params.len()].with_beta(alpha).unwrap();
        let f = random_member(&at_alpha, case_seed(1400, i), 8, 0.5).unwrap();
        let d_alpha = coefficient_deficiency(&f, &at_alpha).unwrap();
        let d_beta = coefficient_deficiency(&f, &at_alpha.with_beta(beta).unwrap()).unwrap();
        assert!(d_alpha > 0.0);
        assert!((d_beta - d_alpha - (alpha - beta)).abs() <= 1e-12);
    }
}

#[test]
fn decompose_reconstruct_round_trip() {
    for (i, p) in common::suite_params().iter().enumerate() {
        for case in 0..40 {
            let f = random_member(p, case_seed(1500 + i as u64, case), 10, 0.5).unwrap();
            let w = decompose(&f, p).unwrap();
            w.validate().unwrap();
            assert!(reconstruct(&w, p).unwrap().max_abs_diff(&f) <= 1e-12);
        }
    }
}

#[test]
fn grid_margin_is_at_least_the_deficiency() {
    let grid = DiskGrid::new(vec![0.3, 0.7, 0.95, 0.999], 64, "test").unwrap();
    let mut rng = common::rng(16);
    for (i, p) in common::suite_params().iter().enumerate() {
        for case in 0..40 {
            let f = random_member(p, case_seed(1600 + i as u64, case), 8, 0.5).unwrap();
            let d = coefficient_deficiency(&f, p).unwrap();
            // random phases leave the coefficient bound unchanged
            let mut phase = || Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            let h = HarmonicFunction::new(
                f.a_abs().iter().map(|(&n, &m)| (n, phase() * m)).collect::<Vec<_>>(),
                f.b_abs().iter().map(|(&n, &m)| (n, phase() * m)).collect::<Vec<_>>(),
            )
            .unwrap();
            let (min_re, _) = min_real_e(&h, p, &grid).unwrap();
            assert!(min_re - p.beta >= d - 1e-12, "margin {} < deficiency {d}", min_re - p.beta);
        }
    }
}

#[test]
fn finite_differences_agree_with_closed_form() {
    let mut rng = common::rng(17);
    for _ in 0..200 {
        let f = common::random_general(&mut rng, 6);
        let p = common::random_params(&mut rng);
        let z = common::random_point(&mut rng, 0.1, 0.9);
        let exact = functional_e(&f, &p, &z).unwrap();
        let fd = functional_e_fd(&f, &p, &z, 1e-4).unwrap();
        assert!((exact - fd).norm() <= 1e-6 * exact.norm().max(1.0));
    }
}

#[test]
fn negative_form_is_real_on_the_positive_axis() {
    let f = random_member(&common::suite_params()[1], 1800, 8, 0.5).unwrap();
    let p = common::suite_params()[1];
    for r in [0.1, 0.5, 0.9] {
        let e = functional_e(&f.to_harmonic(), &p, &EvalPoint::real(r).unwrap()).unwrap();
        assert!(e.im.abs() <= 1e-15);
    }
}
