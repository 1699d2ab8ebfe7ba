use qmem_core::model::{
    expander_decay_crossover, expander_logical_error, expander_threshold, multi_cycle_error, wait_noise,
    ExpanderFamilyConstants,
};

#[test]
fn wait_noise_is_monotone_and_bounded() {
    for &(tau_r, tau_d) in &[(49e-6, 95e-6), (1e-3, 1e-6), (2.0, 2.0)] {
        let top = 1e4 * f64::max(tau_r, tau_d);
        let mut last = 0.0;
        for i in 0..=20_000 {
            let tau = top * i as f64 / 20_000.0;
            let p = wait_noise(tau, tau_r, tau_d).unwrap();
            // Rounds to exactly 1/2 once both exponentials drop below half an ulp.
            assert!(p >= last && (0.0..=0.5).contains(&p), "tau={tau} p={p}");
            if tau < 30.0 * f64::min(tau_r, tau_d) {
                assert!(p < 0.5);
            }
            last = p;
        }
    }
}

#[test]
fn logical_error_grows_with_noise() {
    let consts = ExpanderFamilyConstants::reference();
    let p_th = expander_threshold(&consts).unwrap().p_th;
    for &n in &[1e4, 1e6, 1e8] {
        let mut last = f64::NEG_INFINITY;
        for i in 1..200 {
            let p = p_th * 0.9 * i as f64 / 200.0;
            let b = expander_logical_error(n, p, 0.0, &consts).unwrap();
            assert!(b.log10_pe >= last, "n={n} p={p}");
            last = b.log10_pe;
        }
    }
}

#[test]
fn logical_error_decays_beyond_crossover() {
    let consts = ExpanderFamilyConstants::reference();
    let p_th = expander_threshold(&consts).unwrap().p_th;
    for &ratio in &[0.1, 0.5, 0.9] {
        let p = ratio * p_th;
        let start = expander_decay_crossover(p, 0.0, &consts).unwrap().max(1.0);
        let mut last = f64::INFINITY;
        for i in 0..100 {
            let n = start * 1.2f64.powi(i);
            let b = expander_logical_error(n, p, 0.0, &consts).unwrap();
            if b.flags.is_empty() {
                assert!(b.log10_pe <= last, "ratio={ratio} n={n}");
                last = b.log10_pe;
            }
        }
        assert!(last.is_finite());
    }
}

#[test]
fn union_bound_adds_log_cycles() {
    for pe in [-53.07, -20.0, -5.5] {
        for l in 1..=1000u32 {
            let tau = 51.12e-9;
            let got = multi_cycle_error(pe, l as f64 * tau, tau).unwrap();
            // The cycle count is recovered exactly, so this is bitwise.
            assert_eq!(got, pe + (l as f64).log10(), "L={l}");
        }
    }
}
