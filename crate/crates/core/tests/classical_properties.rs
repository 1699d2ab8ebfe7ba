use qmem_core::classical::{classical_ub, delta_h, delta_h_star, figure3_data, Variant};
use qmem_core::entropy::binary_entropy;

#[test]
fn uniform_input_identity() {
    for i in 0..1000 {
        let alpha = 0.5 * i as f64 / 999.0;
        let lhs = delta_h(alpha, 0.25).unwrap();
        let rhs = 2.0 - binary_entropy(0.25 + alpha / 2.0);
        assert!((lhs - rhs).abs() <= 1e-12, "alpha={alpha}");
    }
}

#[test]
fn maximum_dominates_uniform_input_and_decreases() {
    let mut last = f64::INFINITY;
    for i in 0..200 {
        let alpha = 0.5 * i as f64 / 199.0;
        let (p, v) = delta_h_star(alpha).unwrap();
        assert!((0.0..=1.0).contains(&p));
        assert!(v >= delta_h(alpha, 0.25).unwrap());
        assert!(v <= last + 1e-12, "alpha={alpha}");
        last = v;
    }
}

#[test]
fn bounds_are_rates_and_nonincreasing() {
    for variant in [Variant::New, Variant::Old] {
        let mut last = f64::INFINITY;
        for i in 0..200 {
            let alpha = 0.5 * i as f64 / 199.0;
            let v = classical_ub(alpha, variant).unwrap();
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= last + 1e-12, "{variant:?} alpha={alpha}");
            last = v;
        }
    }
}

#[test]
fn figure_rows_order_the_bounds() {
    let rows = figure3_data(500).unwrap();
    assert_eq!(rows.first().unwrap().ub_new, 1.0);
    assert_eq!(rows.last().unwrap().ub_old, 0.0);
    for r in &rows {
        assert!(r.ub_new >= r.ub_old - 1e-15, "{r:?}");
    }
    let widest = rows.iter().max_by(|a, b| a.gap().total_cmp(&b.gap())).unwrap();
    assert!(widest.alpha < 0.2, "{widest:?}");
}
