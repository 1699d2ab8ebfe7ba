//! Headline numbers of the storage-capacity analysis, recomputed and checked
//! against their published values.

use serde::{Deserialize, Serialize};

use crate::bounds::{depolarizing_dissipation_ub, second_order_bound, HullMode, LogBase};
use crate::decoder_time::{optimize, OptimizerConfig};
use crate::model::{
    bb_complexity, bb_logical_error, expander_complexity, expander_threshold, minimal_block_sizes,
    ExpanderFamilyConstants,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Tolerance {
    Absolute { tol: f64 },
    Relative { tol: f64 },
    /// Accept any value in `[lo, hi]`.
    Range { lo: f64, hi: f64 },
}

impl Tolerance {
    pub fn accepts(&self, value: f64, expected: f64) -> bool {
        match *self {
            Tolerance::Absolute { tol } => (value - expected).abs() <= tol,
            Tolerance::Relative { tol } => (value - expected).abs() <= tol * expected.abs(),
            Tolerance::Range { lo, hi } => (lo..=hi).contains(&value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: Tolerance,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, expected: f64, tolerance: Tolerance) -> Self {
        Self {
            name: name.to_string(),
            value,
            expected,
            tolerance,
            pass: tolerance.accepts(value, expected),
        }
    }

    /// A check whose computation failed.
    fn failed(name: &str, expected: f64, tolerance: Tolerance) -> Self {
        Self {
            name: name.to_string(),
            value: f64::NAN,
            expected,
            tolerance,
            pass: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

fn push<E>(checks: &mut Vec<Check>, name: &str, value: Result<f64, E>, expected: f64, tolerance: Tolerance) {
    checks.push(match value {
        Ok(v) => Check::new(name, v, expected, tolerance),
        Err(_) => Check::failed(name, expected, tolerance),
    });
}

/// Runs every headline computation. `optimizer` is the decoder-time setup;
/// pass `OptimizerConfig::default()` for the reference values.
pub fn headline_numbers(optimizer: &OptimizerConfig) -> Report {
    let mut checks = Vec::new();
    let rel = |tol| Tolerance::Relative { tol };
    let abs = |tol| Tolerance::Absolute { tol };

    let (n_a, n_b) = minimal_block_sizes(7, 8);
    let expander = expander_complexity(n_a, n_b, 7, 8);
    push(
        &mut checks,
        "expander_storage_rate",
        expander.as_ref().map(|c| c.storage_rate()),
        0.0004246,
        abs(1e-7),
    );
    push(
        &mut checks,
        "expander_chi",
        expander.as_ref().map(|c| c.chi() as f64),
        2355.0,
        abs(0.0),
    );
    push(
        &mut checks,
        "expander_threshold",
        expander_threshold(&ExpanderFamilyConstants::reference()).map(|t| t.p_th),
        2.212e-19,
        rel(0.01),
    );
    let bb = bb_complexity(144, 12);
    push(&mut checks, "bb_chi", bb.as_ref().map(|c| c.chi() as f64), 1728.0, abs(0.0));
    push(
        &mut checks,
        "bb_storage_rate",
        bb.as_ref().map(|c| c.storage_rate()),
        0.006944,
        abs(1e-6),
    );
    let fit = bb_logical_error(1e-3, 10);
    push(&mut checks, "bb_logical_error", fit.clone(), 2.3639e-7, rel(1e-3));
    push(
        &mut checks,
        "bb_second_order_bound",
        fit.map_err(|_| ()).and_then(|eps| {
            second_order_bound(1e-3, 144.0, eps, HullMode::PointwiseMin, LogBase::Two)
                .map(|r| r.value)
                .map_err(|_| ())
        }),
        0.8813,
        abs(2e-3),
    );
    push(
        &mut checks,
        "expander_dissipation_gap",
        depolarizing_dissipation_ub(3.318e-19, 0.0, HullMode::PointwiseMin).map(|r| r.gap),
        4.17e-17,
        Tolerance::Range { lo: 2e-17, hi: 8e-17 },
    );
    match optimize(optimizer) {
        Ok(r) => {
            checks.push(Check::new("decoder_time_n_star", r.n_star, 2.565e6, rel(0.05)));
            checks.push(Check::new("decoder_time_tau_star", r.tau_star, 51.12e-9, rel(0.02)));
            checks.push(Check::new("decoder_time_q_star", r.q_star, 0.992_732_07, abs(1e-6)));
        }
        Err(_) => {
            checks.push(Check::failed("decoder_time_n_star", 2.565e6, rel(0.05)));
            checks.push(Check::failed("decoder_time_tau_star", 51.12e-9, rel(0.02)));
            checks.push(Check::failed("decoder_time_q_star", 0.992_732_07, abs(1e-6)));
        }
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Report { checks, all_pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_kinds() {
        assert!(Tolerance::Absolute { tol: 0.1 }.accepts(1.05, 1.0));
        assert!(!Tolerance::Relative { tol: 0.01 }.accepts(1.05, 1.0));
        assert!(Tolerance::Range { lo: 1.0, hi: 2.0 }.accepts(2.0, 0.0));
        assert!(!Tolerance::Absolute { tol: 1.0 }.accepts(f64::NAN, 0.0));
    }

    #[test]
    fn reference_report_passes() {
        let report = headline_numbers(&OptimizerConfig::default());
        for c in &report.checks {
            assert!(c.pass, "{c:?}");
        }
        assert!(report.all_pass);
    }
}
