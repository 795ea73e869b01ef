//! Library results checked against independently coded references.

mod common;

use common::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use zpc_core::engine::{scan_zeros, ScanConfig};
use zpc_core::paircorr::{es_pair_count, fejer_double_sum, fejer_kernel, nt_formula, Window};
use zpc_core::store::{build_synthetic, SyntheticSpec};
use zpc_core::zeta::{
    chi_factor, chi_relative_error, ln_gamma, riemann_siegel_z, rs_theta, zeta_eta, zeta_euler_maclaurin, zeta_eval,
    ComplexPoint,
};

fn pt(sigma: f64, t: f64) -> ComplexPoint {
    ComplexPoint::new(sigma, t).unwrap()
}

#[test]
fn first_zero_matches_eta_bisection() {
    let oracle = first_zero_by_eta_bisection();
    assert!((oracle - 14.134725).abs() < 1e-6);
    let set = scan_zeros(&ScanConfig::new(10.0, 20.0)).unwrap();
    assert_eq!(set.len(), 1);
    assert!((set.records()[0].gamma - oracle).abs() < 1e-9);
}

#[test]
fn theta_matches_malmsten_log_gamma() {
    for t in [12.0, 50.0, 137.5, 400.0] {
        let oracle = theta_oracle(t);
        assert!((rs_theta(t) - oracle).abs() < 1e-9, "t = {t}: {} vs {oracle}", rs_theta(t));
    }
}

#[test]
fn ln_gamma_matches_malmsten() {
    for z in [Complex64::new(0.25, 3.0), Complex64::new(2.5, -7.0), Complex64::new(0.7, 40.0)] {
        let d = ln_gamma(z) - ln_gamma_malmsten(z);
        assert!(d.norm() < 1e-10, "{z}: {d}");
    }
}

#[test]
fn zeta_two_is_pi_squared_over_six() {
    // partial sum plus the Euler–Maclaurin tail 1/N − 1/(2N²) + 1/(6N³)
    let n = 10_000;
    let head: f64 = (1..=n).rev().map(|k| 1.0 / ((k as f64) * (k as f64))).sum();
    let nf = n as f64;
    let tail = 1.0 / nf - 0.5 / (nf * nf) + 1.0 / (6.0 * nf * nf * nf);
    let partial = head + tail;
    assert!((partial - PI * PI / 6.0).abs() < 1e-14);
    let r = zeta_eval(ComplexPoint::real(2.0).unwrap(), 1e-13).unwrap();
    assert!((r.value.re - partial).abs() < 1e-13 + r.abs_error_bound);
    assert!(r.value.im.abs() <= r.abs_error_bound);
}

#[test]
fn zeta_matches_independent_eta_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let s = pt(rng.gen_range(0.05..3.0), rng.gen_range(-12.0..12.0));
        if (s.sigma - 1.0).abs() < 1e-3 && s.t.abs() < 1e-3 {
            continue;
        }
        let lib = zeta_eval(s, 1e-12).unwrap();
        let oracle = zeta_via_eta(s.as_complex());
        let d = (lib.value - oracle).norm();
        assert!(d < 1e-9 * (1.0 + oracle.norm()), "{s:?}: {} vs {oracle}", lib.value);
    }
}

#[test]
fn eta_and_euler_maclaurin_agree_on_overlap() {
    for sigma in [0.5, 0.75, 1.5, 2.5] {
        for t in [0.5, 2.0, 5.0, 9.0] {
            let s = pt(sigma, t);
            let a = zeta_eta(s, 1e-11).unwrap();
            let b = zeta_euler_maclaurin(s, 1e-11).unwrap();
            let d = (a.value - b.value).norm();
            assert!(d <= a.abs_error_bound + b.abs_error_bound, "{s:?}: {d}");
        }
    }
}

#[test]
fn functional_equation_at_sample_point() {
    let s = pt(0.3, 20.0);
    let lhs = zeta_eval(s, 1e-12).unwrap();
    let rhs = zeta_eval(s.reflect(), 1e-12).unwrap();
    let chi = chi_factor(s).unwrap();
    let residual = (lhs.value - chi * rhs.value).norm();
    let allowed = lhs.abs_error_bound
        + chi.norm() * rhs.abs_error_bound
        + chi_relative_error(s) * (chi * rhs.value).norm();
    assert!(residual <= allowed, "{residual} > {allowed}");
}

#[test]
fn hardy_z_agrees_with_zeta_modulus() {
    for t in [30.0, 100.0, 500.0] {
        let z = riemann_siegel_z(t).unwrap();
        let s = pt(0.5, t);
        let zeta = zeta_euler_maclaurin(s, 1e-9).unwrap();
        let d = (z.value.abs() - zeta.value.norm()).abs();
        assert!(d <= z.abs_error_bound + zeta.abs_error_bound, "t = {t}: {d}");
    }
}

#[test]
fn kernel_matches_quadrature_of_its_integral() {
    // 2 Re ∫_0^1 e^{iwα}(1 − α) dα = 2 ∫_0^1 cos(wα)(1 − α) dα
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let w = -60.0 + 120.0 * k as f64 / 99.0 + 1e-3;
        let q = 2.0 * gl_integrate(|a| (w * a).cos() * (1.0 - a), 0.0, 1.0, 64);
        worst = worst.max((fejer_kernel(w) - q).abs());
    }
    for w in [0.0, 0.1, 1.0, 7.3, 50.0] {
        let q = 2.0 * gl_integrate(|a| (w * a).cos() * (1.0 - a), 0.0, 1.0, 64);
        worst = worst.max((fejer_kernel(w) - q).abs());
    }
    assert!(worst <= 1e-10, "{worst}");
}

#[test]
fn fejer_sum_matches_brute_force() {
    let set = build_synthetic(&SyntheticSpec::from_tuples(&[(0.5, 10.0, 1), (0.5, 11.0, 1), (0.5, 12.0, 1)])).unwrap();
    let r = fejer_double_sum(&set, 100.0, Window::ZeroToT).unwrap();
    let brute = fejer_brute_force(&[10.0, 11.0, 12.0], &[1, 1, 1], 100.0);
    assert!((r.total - brute).abs() <= 1e-12 * brute);

    let computed = scan_zeros(&ScanConfig::new(10.0, 300.0)).unwrap();
    let gammas: Vec<f64> = computed.gammas().collect();
    let mult = vec![1; gammas.len()];
    let r = fejer_double_sum(&computed, 300.0, Window::ZeroToT).unwrap();
    let brute = fejer_brute_force(&gammas, &mult, 300.0);
    assert!((r.total - brute).abs() <= 1e-9 * brute);
    assert_eq!(r.diagonal, gammas.len() as f64);
}

#[test]
fn es_matches_brute_force_with_multiplicities() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n = rng.gen_range(1..40);
        let mut seeds = Vec::new();
        let mut g = 15.0;
        for _ in 0..n {
            g += rng.gen_range(0.01..1.5);
            seeds.push((0.5, g, rng.gen_range(1..=3)));
        }
        let set = build_synthetic(&SyntheticSpec::from_tuples(&seeds)).unwrap();
        let gammas: Vec<f64> = set.gammas().collect();
        let mult: Vec<u32> = set.records().iter().map(|r| r.multiplicity).collect();
        for lambda in [0.05, 0.3, 1.0, 4.0] {
            let t = g;
            let lib = es_pair_count(&set, t, lambda).unwrap().count;
            assert_eq!(lib, es_brute_force(&gammas, &mult, t, lambda));
        }
    }
}

#[test]
fn zero_count_tracks_main_terms() {
    let set = scan_zeros(&ScanConfig::new(10.0, 1000.0)).unwrap();
    assert!(set.is_complete());
    let diff = set.count_up_to(1000.0) as f64 - nt_formula(1000.0);
    assert!(diff.abs() <= 2.0 * 1000f64.ln(), "{diff}");
}
