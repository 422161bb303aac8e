use num_complex::Complex64;
use proptest::prelude::*;

use riesz_lab::abscissa::{bohr_cahen_pointwise, bohr_cahen_uniform};
use riesz_lab::cli::{format_complex, parse_complex};
use riesz_lab::grid::linspace;
use riesz_lab::series::{partial_sum, riesz_mean, summatory, translate};
use riesz_lab::special::gamma_fn;
use riesz_lab::{DirichletSeries, RieszKind, RieszSpec};

fn finite_terms() -> impl Strategy<Value = Vec<(f64, Complex64)>> {
    prop::collection::vec((0.0f64..8.0, -2.0f64..2.0, -2.0f64..2.0), 1..12).prop_map(|raw| {
        let mut v: Vec<(f64, Complex64)> = raw.into_iter().map(|(l, a, b)| (l, Complex64::new(a, b))).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-6);
        v
    })
}

fn point() -> impl Strategy<Value = Complex64> {
    (-1.0f64..3.0, -10.0f64..10.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn kind() -> impl Strategy<Value = RieszKind> {
    prop_oneof![Just(RieszKind::First), Just(RieszKind::Second)]
}

/// `Σ |aₙ e^{−λₙ s}|` over `λₙ < x`.
fn absolute_sum(terms: &[(f64, Complex64)], s: Complex64, x: f64) -> f64 {
    terms.iter().filter(|t| t.0 < x).map(|&(l, a)| (a * (-l * s).exp()).norm()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_moves_the_point(terms in finite_terms(), s in point(), w in point(), k in 0.0f64..3.0, kind in kind(), x in 0.1f64..10.0) {
        let d = DirichletSeries::finite(&terms, "p").unwrap();
        let spec = RieszSpec::new(k, kind).unwrap();
        let a = riesz_mean(&translate(&d, w), spec, s, x).unwrap();
        let b = riesz_mean(&d, spec, s + w, x).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * absolute_sum(&terms, s + w, x).max(1e-300));
    }

    #[test]
    fn weights_lie_in_the_unit_interval(terms in finite_terms(), s in point(), k in 0.0f64..4.0, kind in kind(), x in 0.1f64..10.0) {
        let d = DirichletSeries::finite(&terms, "p").unwrap();
        let m = riesz_mean(&d, RieszSpec::new(k, kind).unwrap(), s, x).unwrap();
        prop_assert!(m.norm() <= absolute_sum(&terms, s, x) * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn order_zero_is_the_partial_sum(terms in finite_terms(), s in point(), kind in kind(), x in 0.1f64..10.0) {
        let d = DirichletSeries::finite(&terms, "p").unwrap();
        let m = riesz_mean(&d, RieszSpec::new(0.0, kind).unwrap(), s, x).unwrap();
        prop_assert_eq!(m, partial_sum(&d, s, x).unwrap());
    }

    #[test]
    fn summatory_is_scaled_first_kind_mean(terms in finite_terms(), s in point(), k in 0.0f64..3.0, x in 0.1f64..10.0) {
        let d = DirichletSeries::finite(&terms, "p").unwrap();
        let m = riesz_mean(&d, RieszSpec::first(k).unwrap(), s, x).unwrap();
        let sm = summatory(&d, k, s, x).unwrap();
        prop_assert!((sm - m * x.powf(k)).norm() <= 1e-12 * x.powf(k).max(1.0) * absolute_sum(&terms, s, x).max(1e-300));
    }

    #[test]
    fn sup_bound_on_a_fine_grid(terms in finite_terms(), s in point(), p in 0.0f64..1.5, dq in 0.1f64..2.0) {
        let d = DirichletSeries::finite(&terms, "p").unwrap();
        let q = p + dq;
        let ys = linspace(1e-3, 9.0, 1501);
        let step = ys[1] - ys[0];
        // |d/dy R^p_y| ≤ p Σ|aₙe^{−λₙs}| λₙ / y²
        let mass: f64 = terms.iter().map(|&(l, a)| (a * (-l * s).exp()).norm() * l).sum();
        let mut running = 0.0f64;
        for &y in &ys {
            running = running.max(riesz_mean(&d, RieszSpec::first(p).unwrap(), s, y).unwrap().norm());
            let upper = riesz_mean(&d, RieszSpec::first(q).unwrap(), s, y).unwrap().norm();
            prop_assert!(upper <= running + p * mass / (y * y) * step + 1e-12);
        }
    }

    #[test]
    fn json_round_trip_preserves_means(terms in finite_terms(), s in point(), k in 0.0f64..3.0, x in 0.1f64..10.0) {
        let d = DirichletSeries::finite(&terms, "p").unwrap();
        let text = serde_json::to_string(&d.to_json().unwrap()).unwrap();
        let back = DirichletSeries::from_json_str(&text).unwrap();
        let spec = RieszSpec::first(k).unwrap();
        prop_assert_eq!(riesz_mean(&d, spec, s, x).unwrap(), riesz_mean(&back, spec, s, x).unwrap());
    }

    #[test]
    fn uniform_estimate_dominates_pointwise(terms in finite_terms(), k in 0.0f64..2.0) {
        let d = DirichletSeries::finite(&terms, "p").unwrap();
        let xs = linspace(1.0, 100.0, 60);
        let spec = RieszSpec::first(k).unwrap();
        let p = bohr_cahen_pointwise(&d, spec, &xs).unwrap().value;
        let u = bohr_cahen_uniform(&d, spec, &xs, &linspace(-5.0, 5.0, 11)).unwrap().value;
        prop_assert!(u >= p);
    }

    #[test]
    fn complex_text_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = Complex64::new(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }

    #[test]
    fn gamma_functional_equation(re in 1e-3f64..30.0, im in -20.0f64..20.0) {
        let z = Complex64::new(re, im);
        let rhs = z * gamma_fn(z).unwrap();
        prop_assert!((gamma_fn(z + 1.0).unwrap() - rhs).norm() <= 1e-10 * rhs.norm());
    }
}
