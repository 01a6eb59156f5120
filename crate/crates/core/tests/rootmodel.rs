mod common;

use common::fixture;
use dehnfill_core::bivar::BivarLaurentPoly;
use dehnfill_core::fill::{specialize, FillingSlope};
use dehnfill_core::lab::load_fixture;
use dehnfill_core::rootmodel::{
    fit_count_constant, fit_product_d, k_max, near_unit_threshold_stats, product_bound_check,
    root_geometry, solve_model, RootClass, RootModelError,
};

fn figure_eight() -> BivarLaurentPoly {
    load_fixture(&fixture("figure_eight.json")).unwrap().1
}

fn at(f: &BivarLaurentPoly, p: i64, q: i64) -> dehnfill_core::fill::FillingPoly {
    specialize(f, FillingSlope::new(p, q).unwrap()).unwrap()
}

#[test]
fn square_root_of_two() {
    let f = BivarLaurentPoly::parse("l^2 - 2").unwrap();
    let g = root_geometry(&at(&f, 1, 1)).unwrap();
    let r2 = 2f64.sqrt();
    assert_eq!(g.moduli.len(), 2);
    assert!((g.max_modulus - r2).abs() < 1e-12);
    assert!((g.fitted_d - (r2 - 1.0)).abs() < 1e-12);
    assert_eq!(g.count_beyond_at(1.0), 2);
    assert_eq!(g.count_beyond_at(1.5), 0);
}

#[test]
fn linear_factor_sits_on_the_circle() {
    let f = BivarLaurentPoly::parse("l - 1").unwrap();
    let g = root_geometry(&at(&f, 1, 1)).unwrap();
    assert_eq!(g.moduli, vec![1.0]);
    assert_eq!(g.fitted_d, 0.0);
}

#[test]
fn figure_eight_nine_two() {
    let f = figure_eight();
    let g = root_geometry(&at(&f, 9, 2)).unwrap();
    assert_eq!(g.moduli.len(), g.degree);
    assert!(g.moduli.windows(2).all(|w| w[0] >= w[1]));
    assert!(g.moduli.iter().all(|&m| m > 0.0));
    // the polynomial is reciprocal, so moduli pair up as x, 1/x
    for (a, b) in g.moduli.iter().zip(g.moduli.iter().rev()) {
        assert!((a * b - 1.0).abs() < 1e-9, "{a} {b}");
    }
    assert!((g.max_modulus - 1.0 - g.fitted_d / 2.0).abs() < 1e-15);
    assert!(g.max_modulus > 1.0);
}

#[test]
fn near_unit_classes_partition_the_roots() {
    let f = figure_eight();
    for (p, q) in [(25, 2), (31, 1), (13, 3)] {
        let g = root_geometry(&at(&f, p, q)).unwrap();
        let mut last = f64::INFINITY;
        for eps in [0.02, 0.05, 0.1, 0.2] {
            let s = near_unit_threshold_stats(&f, &g, eps).unwrap();
            let total: usize = s.classes.iter().map(|c| c.count).sum();
            assert_eq!(total, s.total);
            assert_eq!(s.total, g.moduli.len());
            // single-monomial top row: nothing can be near a top-row root
            assert!(s.top_row_roots_empty);
            assert_eq!(s.class(RootClass::NearTop).count, 0);
            if (p, q) == (25, 2) {
                assert!(s.fitted_c1 <= last + 1e-12, "C1 grew at eps {eps}");
                last = s.fitted_c1;
            }
        }
    }
}

#[test]
fn cubic_model_root_is_filtered_out() {
    let r = solve_model(2, 1, 0.2).unwrap();
    assert_eq!(r.degree, 3);
    assert_eq!(r.count, 0);
    assert!(!r.in_regime);
}

#[test]
fn model_product_bound_holds_out_of_sample() {
    let eps = 0.15;
    let (even, odd): (Vec<i64>, Vec<i64>) = (30..=90).partition(|p| p % 2 == 0);
    let train: Vec<_> = even
        .iter()
        .map(|&p| solve_model(p, 1, eps).unwrap())
        .collect();
    let held: Vec<_> = odd
        .iter()
        .map(|&p| solve_model(p, 1, eps).unwrap())
        .collect();
    let c = fit_count_constant(
        &train
            .iter()
            .map(|r| (r.p, r.q, r.count))
            .collect::<Vec<_>>(),
        std::f64::consts::TAU,
    );
    let cases: Vec<_> = train
        .iter()
        .map(|r| (r, k_max(c, r.p, r.q, std::f64::consts::TAU)))
        .collect();
    let d = fit_product_d(&cases).unwrap();
    for r in &held {
        for row in product_bound_check(r, d, k_max(c, r.p, r.q, std::f64::consts::TAU)) {
            assert_ne!(row.passed, Some(false), "({}, {}) {row:?}", r.p, r.q);
        }
    }
}

#[test]
fn rows_beyond_the_roots_are_not_applicable() {
    let r = solve_model(40, 1, 0.1).unwrap();
    let rows = product_bound_check(&r, 1.0, r.count + 2);
    assert_eq!(rows.last().unwrap().lhs, None);
    assert_eq!(rows.last().unwrap().passed, None);
}

#[test]
fn model_rejects_bad_input() {
    assert!(matches!(
        solve_model(4, 2, 0.1),
        Err(RootModelError::BadPair(4, 2))
    ));
    assert!(matches!(
        solve_model(30, 1, 0.3),
        Err(RootModelError::BadEpsilon(_))
    ));
    assert!(matches!(
        solve_model(5000, 1, 0.1),
        Err(RootModelError::DegreeBoundExceeded(..))
    ));
}
