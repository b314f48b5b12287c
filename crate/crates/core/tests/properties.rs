use std::f64::consts::TAU;

use approx::assert_relative_eq;
use proptest::prelude::*;

use grandlab::duality::{n_mr, Conjugate, ConvexFn, PsiKind, YoungFunction};
use grandlab::fourier::{coeffs, haar_partial, hilbert, s_m};
use grandlab::fundamental::phi_g_alpha_m;
use grandlab::norms::{g_psi, lp, orlicz};
use grandlab::{Complex64, GridFunction, PsiFunction, SpaceSpec};

const N: usize = 256;

/// Real trigonometric polynomial `a_0 + sum a_k cos kx + b_k sin kx`.
fn trig(a: &[f64], b: &[f64]) -> GridFunction {
    let (a, b) = (a.to_vec(), b.to_vec());
    GridFunction::sample(SpaceSpec::torus(N), "trig", move |x| {
        let mut s = a[0];
        for k in 1..a.len() {
            s += a[k] * (k as f64 * x).cos() + b[k] * (k as f64 * x).sin();
        }
        s
    })
    .unwrap()
}

fn coefficients() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..12).prop_flat_map(|d| (prop::collection::vec(-2.0..2.0f64, d + 1), prop::collection::vec(-2.0..2.0f64, d + 1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lp_is_a_norm((a, b) in coefficients(), (c, d) in coefficients(), p in 1.0..40.0f64, lambda in -5.0..5.0f64) {
        let f = trig(&a, &b);
        let g = trig(&c, &d);
        let nf = lp(&f, p).unwrap();
        assert_relative_eq!(lp(&f.scale(Complex64::new(lambda, 0.0)), p).unwrap(), lambda.abs() * nf, max_relative = 1e-9, epsilon = 1e-300);
        prop_assert!(lp(&f.add(&g).unwrap(), p).unwrap() <= (nf + lp(&g, p).unwrap()) * (1.0 + 1e-9));
    }

    #[test]
    fn lp_is_monotone_in_p((a, b) in coefficients(), p in 1.0..30.0f64, dp in 0.1..10.0f64) {
        let f = trig(&a, &b);
        prop_assert!(lp(&f, p).unwrap() <= lp(&f, p + dp).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn orlicz_is_a_norm((a, b) in coefficients(), (c, d) in coefficients(), lambda in 0.1..10.0f64) {
        let n = n_mr(1.0, 0.0).unwrap();
        let f = trig(&a, &b);
        let g = trig(&c, &d);
        let nf = orlicz(&f, &n).value;
        assert_relative_eq!(orlicz(&f.scale(Complex64::new(-lambda, 0.0)), &n).value, lambda * nf, max_relative = 1e-6);
        prop_assert!(orlicz(&f.add(&g).unwrap(), &n).value <= (nf + orlicz(&g, &n).value) * (1.0 + 1e-6));
    }

    #[test]
    fn grand_norm_is_a_norm((a, b) in coefficients(), (c, d) in coefficients(), lambda in 0.1..10.0f64, m in 0.5..3.0f64) {
        let psi = PsiFunction::new(1.0, PsiKind::Power { m }).unwrap();
        let f = trig(&a, &b);
        let g = trig(&c, &d);
        let nf = g_psi(&f, 2.0, &psi).unwrap().value;
        assert_relative_eq!(g_psi(&f.scale(Complex64::new(lambda, 0.0)), 2.0, &psi).unwrap().value, lambda * nf, max_relative = 1e-9);
        prop_assert!(g_psi(&f.add(&g).unwrap(), 2.0, &psi).unwrap().value <= (nf + g_psi(&g, 2.0, &psi).unwrap().value) * (1.0 + 1e-9));
    }

    #[test]
    fn parseval((a, b) in coefficients()) {
        let f = trig(&a, &b);
        let c = coeffs(&f, N / 2 - 1).unwrap();
        let energy: f64 = c.iter().map(|(_, v)| v.norm_sqr()).sum();
        assert_relative_eq!(energy, lp(&f, 2.0).unwrap().powi(2), max_relative = 1e-10, epsilon = 1e-20);
    }

    #[test]
    fn partial_sums_are_projections((a, b) in coefficients(), m in 0usize..16) {
        let f = trig(&a, &b);
        let once = s_m(&f, m).unwrap();
        let twice = s_m(&once, m).unwrap();
        prop_assert!(twice.sub(&once).unwrap().max_abs() <= 1e-10 * (1.0 + once.max_abs()));
        if m + 1 >= a.len() {
            prop_assert!(once.sub(&f).unwrap().max_abs() <= 1e-10 * (1.0 + f.max_abs()));
        }
    }

    #[test]
    fn haar_partial_sums_are_projections((a, b) in coefficients(), m in 1usize..200) {
        let f = trig(&a, &b);
        let once = haar_partial(&f, m).unwrap();
        let twice = haar_partial(&once, m).unwrap();
        prop_assert!(twice.sub(&once).unwrap().max_abs() <= 1e-10 * (1.0 + once.max_abs()));
    }

    #[test]
    fn hilbert_is_an_isometry_off_the_mean((a, b) in coefficients()) {
        let f = trig(&a, &b);
        let h = hilbert(&f).unwrap();
        let centred = f.sub(&GridFunction::sample(SpaceSpec::torus(N), "mean", |_| a[0]).unwrap()).unwrap();
        assert_relative_eq!(lp(&h, 2.0).unwrap(), lp(&centred, 2.0).unwrap(), max_relative = 1e-9, epsilon = 1e-12);
        let hh = hilbert(&h).unwrap();
        prop_assert!(hh.add(&centred).unwrap().max_abs() <= 1e-9 * (1.0 + f.max_abs()));
    }

    #[test]
    fn fenchel_young_inequality(m in 0.3..3.0f64, z in 2.0..8.0f64, p in 1.0..500.0f64) {
        let w = YoungFunction::exp(m).unwrap();
        let conj = Conjugate::new(std::sync::Arc::new(w.clone()), 2.0);
        let wp = conj.at(p).value;
        prop_assert!(w.value(z) + wp >= p * z - 1e-9 * (p * z).abs());
    }

    #[test]
    fn psi_power_is_in_the_class(m in 0.2..4.0f64, p in 1.0..1e4f64, dp in 0.01..100.0f64) {
        let psi = PsiFunction::new(1.0, PsiKind::Power { m }).unwrap();
        prop_assert!(psi.eval(p + dp) > psi.eval(p));
        // midpoint convexity of p log psi(p)
        let h = |q: f64| q * psi.ln_eval(q);
        prop_assert!(h(p + 0.5 * dp) <= 0.5 * (h(p) + h(p + dp)) + 1e-12 * h(p + dp).abs());
    }

    #[test]
    fn fundamental_function_is_quasi_concave(alpha in 1.0..8.0f64, m in 0.5..3.0f64, ld in -30.0..-0.01f64, step in 0.01..5.0f64) {
        let (d1, d2) = (ld.exp(), (ld - step).exp());
        let (p1, p2) = (phi_g_alpha_m(d1, alpha, m).unwrap(), phi_g_alpha_m(d2, alpha, m).unwrap());
        prop_assert!(p2 <= p1 * (1.0 + 1e-12));
        prop_assert!(p2 / d2 >= p1 / d1 * (1.0 - 1e-12));
    }
}

#[test]
fn constant_function_lp_is_its_modulus() {
    let f = GridFunction::sample(SpaceSpec::torus_graded(16384), "c", |_| -3.0).unwrap();
    for p in [1.0, 2.0, 7.5, 64.0] {
        assert_relative_eq!(lp(&f, p).unwrap(), 3.0, max_relative = 1e-12);
    }
    assert_relative_eq!(f.weights().iter().sum::<f64>(), 1.0, max_relative = 1e-12);
    assert!(f.nodes().iter().all(|&x| x > 0.0 && x < TAU));
}
