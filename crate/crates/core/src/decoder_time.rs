//! Storage capacity under a decoder-time constraint.
//!
//! A code of `n` qubits needs `τ(n) = c1·g(n)·τ_c + τ_0` seconds per cycle to
//! decode, and the memory idles for that long. Longer cycles mean more noise,
//! larger codes mean smaller finite-size penalties; this module finds the
//! best trade-off along the active constraint.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{second_order_bound, BoundError, HullMode, LogBase};
use crate::model::wait_noise_unchecked;
use crate::search::{golden_section_max, grid_argmax, log_grid, Bracket};

/// Depolarizing parameter above which the converse bound vanishes.
pub const NOISE_LIMIT: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("noise at the readout time alone is {0} >= 1/4: no feasible code size")]
    Infeasible(f64),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Growth law of decoding time with code size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthLaw {
    /// `g(n) = ln n`
    #[default]
    LogN,
}

impl GrowthLaw {
    pub fn eval(self, n: f64) -> f64 {
        match self {
            GrowthLaw::LogN => n.ln(),
        }
    }
}

/// Times are in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    pub c1: f64,
    /// Duration of one classical processing step.
    pub tau_c: f64,
    /// Fixed readout latency.
    pub tau_0: f64,
    pub tau_r: f64,
    pub tau_d: f64,
    /// Target infidelity.
    pub eps: f64,
    pub growth: GrowthLaw,
    pub grid_points: usize,
    /// Relative tolerance of the golden-section refinement in `ln n`.
    pub refine_tol: f64,
    /// Logarithm base of the `log n / 2n` term in the objective.
    pub log_base: LogBase,
    /// Largest code size scanned when the noise limit is out of reach.
    pub n_ceiling: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            c1: 10.0,
            tau_c: 1.0 / 3.2e9,
            tau_0: 5e-9,
            tau_r: 49e-6,
            tau_d: 95e-6,
            eps: 1e-6,
            growth: GrowthLaw::LogN,
            grid_points: 2000,
            refine_tol: 1e-10,
            log_base: LogBase::Natural,
            n_ceiling: 1e15,
        }
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), OptimizerError> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(OptimizerError::OutOfRange {
            name,
            value,
            range: "(0, inf]",
        })
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        positive("c1", self.c1)?;
        positive("tau_c", self.tau_c)?;
        positive("tau_0", self.tau_0)?;
        positive("tau_r", self.tau_r)?;
        positive("tau_d", self.tau_d)?;
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(OptimizerError::OutOfRange {
                name: "eps",
                value: self.eps,
                range: "(0, 1/2)",
            });
        }
        if self.grid_points < 100 {
            return Err(OptimizerError::OutOfRange {
                name: "grid_points",
                value: self.grid_points as f64,
                range: "[100, inf)",
            });
        }
        if !(self.refine_tol > 0.0 && self.refine_tol < 1.0) {
            return Err(OptimizerError::OutOfRange {
                name: "refine_tol",
                value: self.refine_tol,
                range: "(0, 1)",
            });
        }
        if self.n_ceiling.is_nan() || self.n_ceiling <= 1.0 {
            return Err(OptimizerError::OutOfRange {
                name: "n_ceiling",
                value: self.n_ceiling,
                range: "(1, inf]",
            });
        }
        Ok(())
    }

    fn slope(&self) -> f64 {
        self.c1 * self.tau_c
    }

    /// Depolarizing parameter after idling `tau` seconds.
    pub fn p_tilde_at(&self, tau: f64) -> f64 {
        1.5 * wait_noise_unchecked(tau, self.tau_r, self.tau_d)
    }
}

/// Cycle time needed to decode a code of `n` qubits.
pub fn tau_of_n(n: f64, cfg: &OptimizerConfig) -> f64 {
    debug_assert!(n >= 1.0);
    cfg.c1 * cfg.growth.eval(n) * cfg.tau_c + cfg.tau_0
}

/// Largest code size whose cycle noise stays at or below 1/4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibleLimit {
    /// Cycle time at which the noise reaches 1/4 (infinite if never).
    pub tau_max: f64,
    /// `ln n_max`; kept in log form since `n_max` routinely overflows f64.
    pub ln_n_max: f64,
    /// The noise never reaches 1/4.
    pub unbounded: bool,
}

impl FeasibleLimit {
    /// `n_max` itself, `inf` when it is not representable.
    pub fn n_max(&self) -> f64 {
        self.ln_n_max.exp()
    }
}

/// Finds the noise limit by bisection on the cycle time, then inverts the
/// growth law.
pub fn n_max(cfg: &OptimizerConfig) -> Result<FeasibleLimit, OptimizerError> {
    cfg.validate()?;
    let p0 = cfg.p_tilde_at(cfg.tau_0);
    if p0 >= NOISE_LIMIT {
        return Err(OptimizerError::Infeasible(p0));
    }
    if cfg.p_tilde_at(f64::MAX) <= NOISE_LIMIT {
        return Ok(FeasibleLimit {
            tau_max: f64::INFINITY,
            ln_n_max: f64::INFINITY,
            unbounded: true,
        });
    }
    let mut lo = cfg.tau_0;
    let mut hi = cfg.tau_0 + cfg.tau_r.min(cfg.tau_d).min(f64::MAX / 4.0);
    while cfg.p_tilde_at(hi) <= NOISE_LIMIT {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cfg.p_tilde_at(mid) <= NOISE_LIMIT {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut ln_n_max = match cfg.growth {
        GrowthLaw::LogN => (lo - cfg.tau_0) / cfg.slope(),
    };
    // Undo rounding in exp/ln so that n_max itself is feasible.
    for _ in 0..64 {
        let n = ln_n_max.exp();
        if ln_n_max <= 0.0 || !n.is_finite() || cfg.p_tilde_at(tau_of_n(n, cfg)) <= NOISE_LIMIT {
            break;
        }
        ln_n_max -= ln_n_max * 4.0 * f64::EPSILON;
    }
    Ok(FeasibleLimit {
        tau_max: lo,
        ln_n_max,
        unbounded: false,
    })
}

/// Objective at a cycle time and code size; zero once the noise exceeds 1/4.
pub fn objective_at(n: f64, tau: f64, cfg: &OptimizerConfig) -> Result<f64, OptimizerError> {
    let p = cfg.p_tilde_at(tau);
    if p > NOISE_LIMIT {
        return Ok(0.0);
    }
    Ok(second_order_bound(p, n, cfg.eps, HullMode::PointwiseMin, cfg.log_base)?.value)
}

/// The objective along the constraint curve.
pub fn objective(n: f64, cfg: &OptimizerConfig) -> Result<f64, OptimizerError> {
    objective_at(n, tau_of_n(n, cfg), cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerFlag {
    /// Best point is at the scan ceiling below `n_max`: the objective is
    /// still increasing where the search stopped.
    AtScanCeiling,
    /// Best point is on the noise limit `n_max`.
    AtFeasibleBoundary,
    /// More than one sign change in the scan differences.
    Multimodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub n: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerResult {
    pub n_star: f64,
    pub tau_star: f64,
    pub q_star: f64,
    pub p_tilde_star: f64,
    /// Continuous maximizer before rounding to an integer code size.
    pub n_continuous: f64,
    pub limit: FeasibleLimit,
    pub flags: Vec<OptimizerFlag>,
    pub trace: Vec<TracePoint>,
    /// Golden-section brackets, in `ln n`.
    pub certificate: Vec<Bracket>,
}

/// Number of sign changes in successive differences, ignoring flat steps.
pub fn sign_changes(values: &[f64]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for w in values.windows(2) {
        let s = match w[1].partial_cmp(&w[0]) {
            Some(std::cmp::Ordering::Greater) => 1,
            Some(std::cmp::Ordering::Less) => -1,
            _ => 0,
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Maximizes the finite-size bound along `τ = τ(n)` over `1 <= n <= n_max`.
pub fn optimize(cfg: &OptimizerConfig) -> Result<OptimizerResult, OptimizerError> {
    let limit = n_max(cfg)?;
    let ceiling = cfg.n_ceiling.ln();
    let top = limit.ln_n_max.min(ceiling);
    let eval = |u: f64| objective(u.exp().max(1.0), cfg).unwrap_or(f64::NEG_INFINITY);

    let (trace, best_u, certificate) = if top <= 0.0 {
        (vec![TracePoint { n: 1.0, q: eval(0.0) }], 0.0, Vec::new())
    } else {
        let grid: Vec<f64> = log_grid(1.0, top.exp_m1() + 1.0, cfg.grid_points)
            .into_iter()
            .map(f64::ln)
            .collect();
        let values: Vec<f64> = grid.par_iter().map(|&u| eval(u)).collect();
        let i = grid_argmax(&values).ok_or(OptimizerError::Infeasible(f64::NAN))?;
        let lo = grid[i.saturating_sub(1)];
        let hi = grid[(i + 1).min(grid.len() - 1)];
        let g = golden_section_max(eval, lo, hi, cfg.refine_tol);
        let u = if g.value >= values[i] { g.x } else { grid[i] };
        let trace = grid
            .iter()
            .zip(&values)
            .map(|(&u, &q)| TracePoint { n: u.exp(), q })
            .collect();
        (trace, u, g.history)
    };

    let n_continuous = best_u.exp();
    let upper = limit.n_max().min(cfg.n_ceiling).floor().max(1.0);
    let n_star = n_continuous.round().clamp(1.0, upper);
    let tau_star = tau_of_n(n_star, cfg);
    let p_tilde_star = cfg.p_tilde_at(tau_star);
    let q_star = objective_at(n_star, tau_star, cfg)?;

    let mut flags = Vec::new();
    let near_top = (best_u - top).abs() <= 1e-6 * top.max(1.0) || n_star >= upper;
    if near_top {
        if ceiling < limit.ln_n_max {
            flags.push(OptimizerFlag::AtScanCeiling);
        } else {
            flags.push(OptimizerFlag::AtFeasibleBoundary);
        }
    }
    let qs: Vec<f64> = trace.iter().map(|t: &TracePoint| t.q).collect();
    if sign_changes(&qs) > 1 {
        flags.push(OptimizerFlag::Multimodal);
    }

    Ok(OptimizerResult {
        n_star,
        tau_star,
        q_star,
        p_tilde_star,
        n_continuous,
        limit,
        flags,
        trace,
        certificate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourCell {
    pub n: f64,
    pub tau: f64,
    pub q_so: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintPoint {
    pub n: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourTable {
    /// Row-major: `n` varies slowest.
    pub cells: Vec<ContourCell>,
    pub constraint: Vec<ConstraintPoint>,
}

fn axis(lo: f64, hi: f64, count: usize, log: bool) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    if log {
        return log_grid(lo, hi, count);
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

fn check_range_pair(name: &'static str, (lo, hi): (f64, f64), count: usize) -> Result<(), OptimizerError> {
    let ok = lo > 0.0 && hi >= lo && hi.is_finite() && count >= 1 && (count >= 2 || lo == hi);
    if ok {
        Ok(())
    } else {
        Err(OptimizerError::OutOfRange {
            name,
            value: lo,
            range: "positive range with >= 2 points (1 only for a degenerate range)",
        })
    }
}

/// Objective on a grid: `n` log-spaced, `τ` linear. A degenerate range with
/// one point gives a single cell.
pub fn contour_grid(
    cfg: &OptimizerConfig,
    n_range: (f64, f64),
    tau_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<ContourTable, OptimizerError> {
    cfg.validate()?;
    check_range_pair("n_range", n_range, resolution.0)?;
    check_range_pair("tau_range", tau_range, resolution.1)?;
    if n_range.0 < 1.0 {
        return Err(OptimizerError::OutOfRange {
            name: "n_range",
            value: n_range.0,
            range: "[1, inf)",
        });
    }
    let ns = axis(n_range.0, n_range.1, resolution.0, true);
    let taus = axis(tau_range.0, tau_range.1, resolution.1, false);
    let cells = ns
        .par_iter()
        .flat_map_iter(|&n| {
            taus.iter().map(move |&tau| {
                objective_at(n, tau, cfg).map(|q_so| ContourCell { n, tau, q_so })
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let constraint = ns
        .iter()
        .map(|&n| ConstraintPoint {
            n,
            tau: tau_of_n(n, cfg),
        })
        .collect();
    Ok(ContourTable { cells, constraint })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_of_n_trivial_points() {
        let cfg = OptimizerConfig::default();
        assert_eq!(tau_of_n(1.0, &cfg), cfg.tau_0);
        let k = 7.0f64;
        let expect = cfg.c1 * k * cfg.tau_c + cfg.tau_0;
        assert!((tau_of_n(k.exp(), &cfg) - expect).abs() <= 1e-24);
        let t = tau_of_n(2.565e6, &cfg);
        assert!((t / 51.12e-9 - 1.0).abs() < 5e-3, "{t}");
    }

    #[test]
    fn n_max_brackets_noise_limit() {
        let cfg = OptimizerConfig {
            tau_r: 3e-8,
            tau_d: 4.5e-8,
            ..Default::default()
        };
        let lim = n_max(&cfg).unwrap();
        let n = lim.n_max();
        assert!(n.is_finite());
        assert!(cfg.p_tilde_at(tau_of_n(n, &cfg)) <= NOISE_LIMIT);
        assert!(cfg.p_tilde_at(tau_of_n(n * 1.01, &cfg)) > NOISE_LIMIT);
    }

    #[test]
    fn n_max_reference_is_interior() {
        let lim = n_max(&OptimizerConfig::default()).unwrap();
        assert!(!lim.unbounded);
        assert!(lim.ln_n_max > 2.565e6f64.ln());
    }

    #[test]
    fn n_max_unbounded_without_decoherence() {
        let cfg = OptimizerConfig {
            tau_r: f64::INFINITY,
            tau_d: f64::INFINITY,
            ..Default::default()
        };
        let lim = n_max(&cfg).unwrap();
        assert!(lim.unbounded);
        assert_eq!(lim.n_max(), f64::INFINITY);
    }

    #[test]
    fn n_max_rejects_noisy_readout() {
        let cfg = OptimizerConfig {
            tau_0: 1e-3,
            ..Default::default()
        };
        assert!(matches!(n_max(&cfg), Err(OptimizerError::Infeasible(_))));
    }

    #[test]
    fn validation_rejects_bad_config() {
        let bad = [
            OptimizerConfig { eps: 0.5, ..Default::default() },
            OptimizerConfig { grid_points: 99, ..Default::default() },
            OptimizerConfig { tau_c: 0.0, ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err());
        }
    }

    #[test]
    fn reference_optimum() {
        let r = optimize(&OptimizerConfig::default()).unwrap();
        assert!((r.n_star / 2.565e6 - 1.0).abs() < 0.05, "{}", r.n_star);
        assert!((r.tau_star / 51.12e-9 - 1.0).abs() < 0.02, "{}", r.tau_star);
        assert!((r.q_star - 0.992_732_07).abs() < 1e-6, "{}", r.q_star);
        assert!(r.flags.is_empty(), "{:?}", r.flags);
        assert_eq!(r.tau_star, tau_of_n(r.n_star, &OptimizerConfig::default()));
    }

    #[test]
    fn tiny_feasible_region_matches_integer_scan() {
        let cfg = OptimizerConfig {
            tau_r: 3e-8,
            tau_d: 4.5e-8,
            ..Default::default()
        };
        let lim = n_max(&cfg).unwrap();
        assert!(lim.n_max() < 100.0, "{}", lim.n_max());
        let r = optimize(&cfg).unwrap();
        let mut best = (1.0, f64::NEG_INFINITY);
        let mut n = 1.0;
        while n <= lim.n_max() {
            let q = objective(n, &cfg).unwrap();
            if q > best.1 {
                best = (n, q);
            }
            n += 1.0;
        }
        assert_eq!(r.n_star, best.0);
        assert_eq!(r.q_star, best.1);
    }

    #[test]
    fn vanishing_decoder_time_hits_ceiling() {
        let cfg = OptimizerConfig {
            tau_c: 1e-30,
            n_ceiling: 1e9,
            ..Default::default()
        };
        let r = optimize(&cfg).unwrap();
        assert!(r.flags.contains(&OptimizerFlag::AtScanCeiling), "{:?}", r.flags);
        assert_eq!(r.n_star, 1e9);
    }

    #[test]
    fn single_cell_contour_matches_bound() {
        let cfg = OptimizerConfig::default();
        let t = contour_grid(&cfg, (1e4, 1e4), (3e-8, 3e-8), (1, 1)).unwrap();
        assert_eq!(t.cells.len(), 1);
        let p = cfg.p_tilde_at(3e-8);
        let direct = second_order_bound(p, 1e4, cfg.eps, HullMode::PointwiseMin, cfg.log_base).unwrap();
        assert_eq!(t.cells[0].q_so, direct.value);
    }

    #[test]
    fn sign_changes_counts_turns() {
        assert_eq!(sign_changes(&[1.0, 2.0, 3.0, 2.0, 1.0]), 1);
        assert_eq!(sign_changes(&[1.0, 2.0, 2.0, 3.0]), 0);
        assert_eq!(sign_changes(&[1.0, 2.0, 1.0, 2.0]), 2);
    }
}
