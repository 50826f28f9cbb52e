use std::f64::consts::{FRAC_PI_4, SQRT_2};

use approx::assert_relative_eq;
use proptest::prelude::*;

use ptsim::dilation::{build_dilation, frame_vectors, DilationOptions};
use ptsim::linalg::{self, dot, CMatrix, C64, I, ONE, ZERO};
use ptsim::pt::BenderModel;
use ptsim::repro::bender_dilation;
use ptsim::weak::{
    collapse, eta_inner, expectation_eta, gaussian, pointer_exact, pointer_weak_approx, small_time_pair,
    unconditioned_probability, weak_value, PointerDistribution, PointerTerm, WeakSetup, DEFAULT_GRID_POINTS,
};
use ptsim::{random, Error, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn hermitian(rng: &mut impl rand::Rng, n: usize) -> CMatrix {
    let a = random::complex_matrix(rng, n, n);
    (&a + &a.adjoint()).scale_real(0.5)
}

#[test]
fn spin_weak_value_exceeds_spectrum() {
    // real spinors at angles pi/4 and eps - pi/4 give cot(eps)
    let sz = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let eps = 0.1f64;
    let (a, b) = (FRAC_PI_4, eps - FRAC_PI_4);
    let pre = vec![ONE * a.cos(), ONE * a.sin()];
    let post = vec![ONE * b.cos(), ONE * b.sin()];
    let setup = WeakSetup::new(sz, pre, post, 0.0, 1.0, &tol()).unwrap();
    let w = weak_value(&setup, &tol()).unwrap();
    assert_relative_eq!(w.re, 1.0 / eps.tan(), max_relative = 1e-12);
    assert!(w.re > 9.9);
    assert!(w.im.abs() < 1e-15);
}

#[test]
fn orthogonal_selection_is_rejected() {
    let setup = WeakSetup::new(CMatrix::identity(2), vec![ONE, ZERO], vec![ZERO, ONE], 0.1, 1.0, &tol()).unwrap();
    assert!(matches!(weak_value(&setup, &tol()), Err(Error::VanishingOverlap { .. })));
}

#[test]
fn non_hermitian_observable_is_rejected() {
    let a = CMatrix::from_rows(&[vec![ONE, ONE], vec![ZERO, ONE]]).unwrap();
    let v = vec![ONE, ONE];
    assert!(matches!(WeakSetup::new(a, v.clone(), v, 0.1, 1.0, &tol()), Err(Error::InvalidInput(_))));
}

#[test]
fn both_complex_eigenvalues_are_read_out() {
    let t = tol();
    for s in [0.05, 0.1, 0.5, 0.9] {
        let m = BenderModel::new(SQRT_2, FRAC_PI_4, s);
        let d = bender_dilation(SQRT_2, FRAC_PI_4, s, &t).unwrap();
        for (i, lambda) in m.eigenvalues().into_iter().enumerate() {
            let f = frame_vectors(&d, i).unwrap();
            let setup = WeakSetup::new(d.h_tilde.clone(), f.psi_tilde, f.mu_tilde, 0.0, 1.0, &t).unwrap();
            let w = weak_value(&setup, &t).unwrap();
            assert!((w - lambda).norm() < 1e-10, "s = {s}, i = {i}: {w} vs {lambda}");
        }
    }
}

#[test]
fn random_systems_read_out_their_spectrum() {
    let t = tol();
    let mut rng = random::rng(31);
    for n in 2..=6 {
        let (sys, canon) = random::random_system(&mut rng, n, 1, &t).unwrap();
        let d = build_dilation(&sys.h, &canon, &DilationOptions::default(), &t).unwrap();
        for (i, lambda) in canon.eigenvalues().into_iter().enumerate() {
            let f = frame_vectors(&d, i).unwrap();
            let setup = WeakSetup::new(d.h_tilde.clone(), f.psi_tilde, f.mu_tilde, 0.0, 1.0, &t).unwrap();
            let w = weak_value(&setup, &t).unwrap();
            assert!((w - lambda).norm() < 1e-9 * lambda.norm().max(1.0));
        }
    }
}

#[test]
fn expectation_of_single_mode_is_zero_over_zero() {
    let t = tol();
    let d = bender_dilation(SQRT_2, FRAC_PI_4, 0.1, &t).unwrap();
    // a broken mode alone has zero eta-norm
    assert_eq!(expectation_eta(&d, &[ONE, ZERO], &t).unwrap_err(), Error::NullEtaNorm);
    let e = expectation_eta(&d, &[ONE, C64::new(0.5, 0.2)], &t).unwrap();
    assert!((e.lhs - e.rhs).norm() < 1e-10);
}

#[test]
fn eta_inner_reproduces_sip() {
    let t = tol();
    let m = BenderModel::new(SQRT_2, FRAC_PI_4, 0.3);
    let c = m.canonical(&t).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let v = eta_inner(&c.psi_prime.column(i), &c.psi_prime.column(j), &c.eta).unwrap();
            assert!((v - c.s[(i, j)]).norm() < 1e-12);
        }
    }
    assert!(matches!(eta_inner(&[ONE], &[ONE], &c.eta), Err(Error::DimensionMismatch(_))));
}

#[test]
fn collapse_on_two_level_model() {
    let t = tol();
    let m = BenderModel::new(SQRT_2, FRAC_PI_4, 0.1);
    let c = m.canonical(&t).unwrap();
    let [lambda, _] = m.eigenvalues();
    let a = [C64::new(1.0, 0.0), C64::new(0.5, 0.5)];
    let out = collapse(&c, &a, 0, &t).unwrap();
    // z = conj(a_2) = 0.5 - 0.5i; 2 Re(z lambda) / 2 Re z
    let z = a[0] * a[1].conj();
    assert_relative_eq!(out.detected_value, (z * lambda).re / z.re, max_relative = 1e-14);
    assert_eq!(out.pair, (0, 1));
    let norm = eta_inner(&out.post_state, &out.post_state, &c.eta).unwrap();
    assert_relative_eq!(norm.norm(), 1.0, max_relative = 1e-12);
    assert!(matches!(collapse(&c, &a, 2, &t), Err(Error::IndexOutOfRange { index: 2, dim: 2 })));
}

#[test]
fn collapse_on_real_level() {
    let t = tol();
    let mut rng = random::rng(3);
    let (_, canon) = random::random_system(&mut rng, 3, 1, &t).unwrap();
    assert_eq!(canon.perm[2], 2);
    let a = [ONE, ONE, C64::new(0.0, -2.0)];
    let out = collapse(&canon, &a, 2, &t).unwrap();
    assert_eq!(out.detected_value, canon.eigenvalues()[2].re);
    let norm = eta_inner(&out.post_state, &out.post_state, &canon.eta).unwrap();
    assert_relative_eq!(norm.re, 1.0, max_relative = 1e-12);
    assert_eq!(collapse(&canon, &[ONE, ONE, ZERO], 2, &t).unwrap_err(), Error::NullDenominator);
}

#[test]
fn gaussian_amplitude_closed_form() {
    let w = 0.8f64;
    let g = gaussian(0.3, C64::new(0.1, 0.0), w);
    let norm = (2.0 * std::f64::consts::PI * w * w).powf(-0.25);
    assert_relative_eq!(g.re, norm * (-(0.2f64 * 0.2) / (4.0 * w * w)).exp(), max_relative = 1e-14);
    assert_eq!(g.im, 0.0);
}

#[test]
fn pointer_mean_follows_real_part_of_weak_value() {
    let t = tol();
    let d = bender_dilation(SQRT_2, FRAC_PI_4, 0.1, &t).unwrap();
    let f = frame_vectors(&d, 0).unwrap();
    for g in [0.001, 0.005, 0.01] {
        let setup = WeakSetup::new(d.h_tilde.clone(), f.psi_tilde.clone(), f.mu_tilde.clone(), g, 1.0, &t).unwrap();
        let aw = weak_value(&setup, &t).unwrap();
        let exact = pointer_exact(&setup, &t).unwrap();
        let (lo, hi) = exact.default_range(&[]);
        let exact = exact.sampled(lo, hi, DEFAULT_GRID_POINTS).unwrap();
        let mean = exact.grid_mean_position().unwrap();
        assert!((mean - g * aw.re).abs() < 1e-4, "g = {g}: {mean} vs {}", g * aw.re);
        let approx = pointer_weak_approx(&setup, &t).unwrap();
        assert!((approx.mean_position().unwrap() - g * aw.re).abs() < 1e-14);
    }
}

#[test]
fn analytic_and_grid_distances_agree() {
    let t = tol();
    let d = bender_dilation(SQRT_2, FRAC_PI_4, 0.1, &t).unwrap();
    let f = frame_vectors(&d, 0).unwrap();
    let setup = WeakSetup::new(d.h_tilde.clone(), f.psi_tilde, f.mu_tilde, 0.05, 1.0, &t).unwrap();
    let exact = pointer_exact(&setup, &t).unwrap();
    let approx = pointer_weak_approx(&setup, &t).unwrap();
    let analytic = exact.l2_distance(&approx).unwrap();
    let (lo, hi) = exact.default_range(&[&approx]);
    let grid = exact
        .sampled(lo, hi, DEFAULT_GRID_POINTS)
        .unwrap()
        .grid_l2_distance(&approx.sampled(lo, hi, DEFAULT_GRID_POINTS).unwrap())
        .unwrap();
    assert_relative_eq!(analytic, grid, max_relative = 1e-6);
}

#[test]
fn distance_is_second_order_in_coupling() {
    let t = tol();
    let d = bender_dilation(SQRT_2, FRAC_PI_4, 0.1, &t).unwrap();
    let f = frame_vectors(&d, 0).unwrap();
    let dist = |g: f64| {
        let setup = WeakSetup::new(d.h_tilde.clone(), f.psi_tilde.clone(), f.mu_tilde.clone(), g, 1.0, &t).unwrap();
        pointer_exact(&setup, &t).unwrap().l2_distance(&pointer_weak_approx(&setup, &t).unwrap()).unwrap()
    };
    let ratio = dist(0.02) / dist(0.01);
    assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn zero_coupling_leaves_pointer_unshifted() {
    let t = tol();
    let mut rng = random::rng(4);
    let a = hermitian(&mut rng, 3);
    let v = random::complex_vector(&mut rng, 3);
    let w = random::complex_vector(&mut rng, 3);
    let setup = WeakSetup::new(a, v.clone(), w.clone(), 0.0, 1.0, &t).unwrap();
    let exact = pointer_exact(&setup, &t).unwrap();
    let reference = PointerDistribution {
        terms: vec![PointerTerm { weight: dot(&w, &v), shift: ZERO }],
        width: 1.0,
        grid: None,
    };
    assert!(exact.l2_distance(&reference).unwrap() < 1e-12);
}

#[test]
fn small_time_pair_starts_at_sip() {
    let t = tol();
    let d = bender_dilation(SQRT_2, FRAC_PI_4, 0.1, &t).unwrap();
    let p = small_time_pair(&d, 0, 1, 0.0, &t).unwrap();
    assert!((p.tilde - ONE).norm() < 1e-12);
    assert!((p.eta_side - ONE).norm() < 1e-12);
    let q = small_time_pair(&d, 0, 0, 0.0, &t).unwrap();
    assert!(q.tilde.norm() < 1e-12 && q.eta_side.norm() < 1e-12);
    assert!(matches!(small_time_pair(&d, 0, 2, 0.1, &t), Err(Error::IndexOutOfRange { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn probability_is_independent_of_coupling(seed in any::<u64>(), g in 0.0f64..2.0) {
        let t = tol();
        let mut rng = random::rng(seed);
        let a = hermitian(&mut rng, 3);
        let pre = random::complex_vector(&mut rng, 3);
        let (_, basis) = linalg::eigh(&hermitian(&mut rng, 3), &t).unwrap();
        let setup = WeakSetup::new(a, pre.clone(), pre.clone(), g, 0.7, &t).unwrap();
        let total = unconditioned_probability(&setup, &basis, &t).unwrap();
        let norm = dot(&pre, &pre).re;
        prop_assert!((total - norm).abs() < 1e-10 * norm);
    }

    #[test]
    fn expectation_weak_value_lies_in_spectrum(seed in any::<u64>(), n in 1usize..=5) {
        let t = tol();
        let mut rng = random::rng(seed);
        let a = hermitian(&mut rng, n);
        let v = random::complex_vector(&mut rng, n);
        let setup = WeakSetup::new(a.clone(), v.clone(), v, 0.0, 1.0, &t).unwrap();
        let w = weak_value(&setup, &t).unwrap();
        let (values, _) = linalg::eigh(&a, &t).unwrap();
        prop_assert!(w.im.abs() < 1e-12 * a.norm_fro());
        prop_assert!(w.re >= values[0] - 1e-12 && w.re <= values[n - 1] + 1e-12);
    }

    #[test]
    fn weak_value_ignores_state_normalization(seed in any::<u64>(), re in 0.1f64..3.0, im in -3.0f64..3.0) {
        let t = tol();
        let mut rng = random::rng(seed);
        let a = hermitian(&mut rng, 3);
        let pre = random::complex_vector(&mut rng, 3);
        let post = random::complex_vector(&mut rng, 3);
        let base = WeakSetup::new(a.clone(), pre.clone(), post.clone(), 0.0, 1.0, &t).unwrap();
        prop_assume!(base.overlap(&t).is_ok());
        let k = C64::new(re, im);
        let scaled = WeakSetup::new(
            a,
            pre.iter().map(|&x| x * k).collect(),
            post.iter().map(|&x| x * I * k).collect(),
            0.0,
            1.0,
            &t,
        )
        .unwrap();
        let (w0, w1) = (weak_value(&base, &t).unwrap(), weak_value(&scaled, &t).unwrap());
        prop_assert!((w0 - w1).norm() <= 1e-10 * w0.norm().max(1.0));
    }

    #[test]
    fn collapse_post_state_has_unit_eta_norm(seed in any::<u64>(), n in 2usize..=5) {
        let t = tol();
        let mut rng = random::rng(seed);
        let (_, canon) = random::random_system(&mut rng, n, 1, &t).unwrap();
        let a = random::complex_vector(&mut rng, n);
        for i in 0..n {
            if let Ok(out) = collapse(&canon, &a, i, &t) {
                let norm = eta_inner(&out.post_state, &out.post_state, &canon.eta).unwrap();
                prop_assert!((norm.norm() - 1.0).abs() < 1e-9);
            }
        }
    }
}
