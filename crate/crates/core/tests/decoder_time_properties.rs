use qmem_core::decoder_time::{
    contour_grid, objective, optimize, sign_changes, tau_of_n, OptimizerConfig, NOISE_LIMIT,
};

#[test]
fn reference_objective_is_unimodal() {
    let r = optimize(&OptimizerConfig::default()).unwrap();
    let qs: Vec<f64> = r.trace.iter().map(|t| t.q).collect();
    assert_eq!(sign_changes(&qs), 1);
    let best = qs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(r.q_star >= best - 1e-12);
}

#[test]
fn doubling_grid_keeps_optimum() {
    let cfg = OptimizerConfig::default();
    let a = optimize(&cfg).unwrap();
    let b = optimize(&OptimizerConfig {
        grid_points: 2 * cfg.grid_points,
        ..cfg
    })
    .unwrap();
    assert!((a.n_continuous.ln() - b.n_continuous.ln()).abs() <= 1e-6, "{} {}", a.n_continuous, b.n_continuous);
    assert!((a.q_star - b.q_star).abs() <= cfg.refine_tol);
}

#[test]
fn results_sit_on_the_constraint() {
    let variants = [
        OptimizerConfig::default(),
        OptimizerConfig { c1: 3.0, ..Default::default() },
        OptimizerConfig { eps: 1e-3, ..Default::default() },
        OptimizerConfig { tau_r: 3e-8, tau_d: 4.5e-8, ..Default::default() },
        OptimizerConfig { tau_r: 5e-6, tau_d: 2e-6, ..Default::default() },
    ];
    for cfg in variants {
        let r = optimize(&cfg).unwrap();
        assert_eq!(r.tau_star, tau_of_n(r.n_star, &cfg));
        assert!(cfg.p_tilde_at(r.tau_star) < NOISE_LIMIT);
        assert_eq!(r.q_star, objective(r.n_star, &cfg).unwrap());
        assert_eq!(r.n_star, r.n_star.round());
    }
}

#[test]
fn contour_reproduces_optimum() {
    let cfg = OptimizerConfig::default();
    let r = optimize(&cfg).unwrap();
    let t = contour_grid(&cfg, (r.n_star, r.n_star), (r.tau_star, r.tau_star), (1, 1)).unwrap();
    assert_eq!(t.cells[0].q_so, r.q_star);
    assert_eq!(t.constraint[0].tau, r.tau_star);
}

#[test]
fn contour_decreases_with_cycle_time() {
    let cfg = OptimizerConfig::default();
    let t = contour_grid(&cfg, (1e2, 1e9), (5e-9, 2e-7), (50, 50)).unwrap();
    assert_eq!(t.cells.len(), 2500);
    assert_eq!(t.constraint.len(), 50);
    for row in t.cells.chunks(50) {
        for w in row.windows(2) {
            assert_eq!(w[0].n, w[1].n);
            assert!(w[1].tau > w[0].tau);
            assert!(w[1].q_so <= w[0].q_so, "{:?} {:?}", w[0], w[1]);
        }
    }
}
