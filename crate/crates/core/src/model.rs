//! Circuit-complexity accounting, storage rates, time-dependent noise and
//! logical-error bounds for wait–refresh memories.
//!
//! Probability bounds for expander codes are kept as base-10 logarithms:
//! thresholds near 1e-19 raised to exponents in the hundreds underflow f64.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::binary_entropy;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("expander complexity needs n_a > n_b >= 1, got n_a={n_a}, n_b={n_b}")]
    BlockSizes { n_a: u64, n_b: u64 },
    #[error("degenerate degrees d_a={d_a}, d_b={d_b}: classical rate is zero")]
    DegenerateRate { d_a: u64, d_b: u64 },
    #[error("expander complexity needs d_b > d_a >= 1, got d_a={d_a}, d_b={d_b}")]
    Degrees { d_a: u64, d_b: u64 },
    #[error("edge counts disagree: n_a*d_a = {bit_edges} but n_b*d_b = {check_edges}")]
    InconsistentDegrees { bit_edges: u64, check_edges: u64 },
    #[error("bivariate bicycle accounting needs even n, got {0}")]
    OddBlockLength(u64),
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("combined degree d = {0} must exceed 2")]
    DegreeTooSmall(f64),
    #[error("closed-form rate {closed} disagrees with component sum {summed}")]
    RateMismatch { closed: f64, summed: f64 },
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<(), ModelError> {
    if value.is_nan() || value < lo || value > hi {
        return Err(ModelError::OutOfRange { name, value, range });
    }
    Ok(())
}

/// Constants of a quantum expander code family, derived from the classical
/// graph degrees and expansion parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpanderFamilyConstants {
    pub d_a: f64,
    pub d_b: f64,
    pub gamma: f64,
    pub delta: f64,
    pub d: f64,
    pub r: f64,
    pub beta0: f64,
    pub beta1: f64,
    pub beta: f64,
    pub gamma0: f64,
    pub alpha: f64,
    pub c0: f64,
    /// Binary entropy of `alpha`, in bits.
    pub h_alpha: f64,
    /// Exponent constant multiplying `√n`, equal to `alpha * gamma0`.
    pub c_prime: f64,
}

impl ExpanderFamilyConstants {
    pub fn new(d_a: f64, d_b: f64, gamma: f64, delta: f64) -> Result<Self, ModelError> {
        if !(d_a >= 1.0 && d_b >= 1.0) {
            return Err(ModelError::OutOfRange {
                name: "degree",
                value: d_a.min(d_b),
                range: "[1, inf)",
            });
        }
        check_range("gamma", gamma, f64::MIN_POSITIVE, f64::INFINITY, "(0, inf)")?;
        // beta1 - beta must stay positive for c0 to exist.
        if !(0.0..1.0 / 16.0).contains(&delta) {
            return Err(ModelError::OutOfRange {
                name: "delta",
                value: delta,
                range: "[0, 1/16)",
            });
        }
        let d = d_b * d_b + 2.0 * d_b * (d_a - 1.0);
        let r = d_a / d_b;
        let beta0 = 1.0 - 8.0 * delta;
        let beta1 = 1.0 - 16.0 * delta;
        let beta = 0.99 * beta1;
        let gamma0 = r * r * gamma / (1.0 + r * r).sqrt();
        let alpha = r * beta / (4.0 + 2.0 * r * beta);
        let c0 = 4.0 / (d_a * (beta1 - beta));
        Ok(Self {
            d_a,
            d_b,
            gamma,
            delta,
            d,
            r,
            beta0,
            beta1,
            beta,
            gamma0,
            alpha,
            c0,
            h_alpha: binary_entropy(alpha),
            c_prime: alpha * gamma0,
        })
    }

    /// `gamma = 2`, `delta = 1e-5`, `d_a = 7`, `d_b = 8`.
    pub fn reference() -> Self {
        Self::new(7.0, 8.0, 2.0, 1e-5).expect("reference constants are valid")
    }
}

/// Component counts of one error-correction cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityBreakdown {
    pub n: u64,
    pub k: u64,
    /// Ancillas.
    pub n_a: u64,
    /// Hadamard gates.
    pub n_h: u64,
    /// Syndrome-extraction CNOTs.
    pub n_synd: u64,
    /// Measurements.
    pub n_m: u64,
    /// Correction gates.
    pub n_ec: u64,
}

impl ComplexityBreakdown {
    /// Gate complexity: Hadamards, CNOTs and correction gates.
    pub fn gate_count(&self) -> u64 {
        self.n_h + self.n_synd + self.n_ec
    }

    /// Total complexity: qubits, ancillas, gates and measurements.
    pub fn chi(&self) -> u64 {
        self.n + self.n_a + self.gate_count() + self.n_m
    }

    pub fn storage_rate(&self) -> f64 {
        self.k as f64 / self.chi() as f64
    }

    /// Overhead, the reciprocal of the storage rate.
    pub fn overhead(&self) -> f64 {
        self.chi() as f64 / self.k as f64
    }
}

/// Classical code rate `1 - d_a/d_b`.
pub fn classical_rate(d_a: u64, d_b: u64) -> f64 {
    1.0 - d_a as f64 / d_b as f64
}

/// Quantum code rate `(d_b - d_a)² / (d_b² + d_a²)`.
pub fn product_rate(d_a: u64, d_b: u64) -> f64 {
    let diff = d_b.abs_diff(d_a) as f64;
    diff * diff / (d_b * d_b + d_a * d_a) as f64
}

/// Closed-form storage rate of the expander-code memory, a function of
/// the degrees only.
pub fn expander_storage_rate(d_a: u64, d_b: u64) -> Result<f64, ModelError> {
    if d_a == d_b {
        return Err(ModelError::DegenerateRate { d_a, d_b });
    }
    if d_a == 0 || d_b < d_a {
        return Err(ModelError::Degrees { d_a, d_b });
    }
    let rc = classical_rate(d_a, d_b);
    let r = product_rate(d_a, d_b);
    let per_logical = 3.0 / r + (3 + d_a + d_b) as f64 * (2.0 / rc) * (1.0 / rc - 1.0);
    Ok(1.0 / per_logical)
}

/// Component counts for the hypergraph product of an `n_b × n_a` check
/// matrix with bit degree `d_a` and check degree `d_b`.
///
/// The closed-form rate from [`expander_storage_rate`] is recomputed and
/// must agree with `k / chi`.
pub fn expander_complexity(n_a: u64, n_b: u64, d_a: u64, d_b: u64) -> Result<ComplexityBreakdown, ModelError> {
    if d_a == d_b {
        return Err(ModelError::DegenerateRate { d_a, d_b });
    }
    if !(n_a > n_b && n_b >= 1) {
        return Err(ModelError::BlockSizes { n_a, n_b });
    }
    if !(d_b > d_a && d_a >= 1) {
        return Err(ModelError::Degrees { d_a, d_b });
    }
    if n_a * d_a != n_b * d_b {
        return Err(ModelError::InconsistentDegrees {
            bit_edges: n_a * d_a,
            check_edges: n_b * d_b,
        });
    }
    let cross = 2 * n_a * n_b;
    let n = n_a * n_a + n_b * n_b;
    let breakdown = ComplexityBreakdown {
        n,
        k: (n_a - n_b).pow(2),
        n_a: cross,
        n_h: cross,
        n_synd: cross * (d_a + d_b),
        n_m: cross,
        n_ec: 2 * n,
    };
    let closed = expander_storage_rate(d_a, d_b)?;
    let summed = breakdown.storage_rate();
    if (closed - summed).abs() > 1e-12 * summed.abs().max(1e-300) {
        return Err(ModelError::RateMismatch { closed, summed });
    }
    Ok(breakdown)
}

/// Smallest consistent block sizes for degrees `(d_a, d_b)`: `n_a = d_b / g`,
/// `n_b = d_a / g` with `g = gcd(d_a, d_b)`.
pub fn minimal_block_sizes(d_a: u64, d_b: u64) -> (u64, u64) {
    let g = gcd(d_a, d_b).max(1);
    (d_b / g, d_a / g)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Component counts for a bivariate bicycle memory with weight-6 checks:
/// `chi = 12 n`.
pub fn bb_complexity(n: u64, k: u64) -> Result<ComplexityBreakdown, ModelError> {
    if !n.is_multiple_of(2) {
        return Err(ModelError::OddBlockLength(n));
    }
    Ok(ComplexityBreakdown {
        n,
        k,
        n_a: n,
        n_h: n,
        n_synd: 6 * n,
        n_m: n,
        n_ec: 2 * n,
    })
}

/// Physical noise accumulated while idling for `tau` seconds, given
/// relaxation and dephasing times.
pub fn wait_noise(tau: f64, tau_r: f64, tau_d: f64) -> Result<f64, ModelError> {
    check_range("tau", tau, 0.0, f64::INFINITY, "[0, inf)")?;
    check_range("tau_r", tau_r, f64::MIN_POSITIVE, f64::INFINITY, "(0, inf)")?;
    check_range("tau_d", tau_d, f64::MIN_POSITIVE, f64::INFINITY, "(0, inf)")?;
    Ok(wait_noise_unchecked(tau, tau_r, tau_d))
}

pub(crate) fn wait_noise_unchecked(tau: f64, tau_r: f64, tau_d: f64) -> f64 {
    // 1/2 - e^{-a}/6 - e^{-b}/3 = -(expm1(-a))/6 - (expm1(-b))/3, exact near tau = 0.
    -(-tau / tau_r).exp_m1() / 6.0 - (-tau / tau_d).exp_m1() / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Composition {
    pub value: f64,
    pub clamped: bool,
    /// `Some(true)` when a threshold was supplied and the sum stays below it.
    pub below_threshold: Option<bool>,
}

/// Residual and fresh local-stochastic noise add: `(p_r, q)` followed by
/// `(p, q)` is local stochastic with parameter `p_r + p`.
pub fn compose_local_stochastic(p_r: f64, p: f64, threshold: Option<f64>) -> Result<Composition, ModelError> {
    check_range("p_r", p_r, 0.0, 1.0, "[0, 1]")?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    let sum = p_r + p;
    Ok(Composition {
        value: sum.min(1.0),
        clamped: sum > 1.0,
        below_threshold: threshold.map(|t| sum < t),
    })
}

/// Default residual-noise constant. Not pinned by the underlying analysis.
pub const DEFAULT_RESIDUAL_CONSTANT: f64 = 1.0;

/// Residual noise after a refresh: `K · q^{1/c0}`.
pub fn residual_noise(q: f64, consts: &ExpanderFamilyConstants, k_const: f64) -> Result<f64, ModelError> {
    check_range("q", q, 0.0, 1.0, "[0, 1]")?;
    if q == 0.0 {
        return Ok(0.0);
    }
    Ok(k_const * (q.ln() / consts.c0).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub p_th: f64,
    pub log10_p_th: f64,
}

/// Noise threshold of the expander family,
/// `(2^{-h(α)} / ((d-1)(1 + 1/(d-2))^{d-2}))^{1/α}`, evaluated in log space.
pub fn expander_threshold(consts: &ExpanderFamilyConstants) -> Result<Threshold, ModelError> {
    let d = consts.d;
    if d <= 2.0 {
        return Err(ModelError::DegreeTooSmall(d));
    }
    let ln_inner = -consts.h_alpha * std::f64::consts::LN_2
        - (d - 1.0).ln()
        - (d - 2.0) * (1.0 / (d - 2.0)).ln_1p();
    let ln_p = ln_inner / consts.alpha;
    Ok(Threshold {
        p_th: ln_p.exp(),
        log10_p_th: ln_p / std::f64::consts::LN_10,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFlag {
    /// `p + p_r >= p_th`: only the trivial bound applies.
    AboveThreshold,
    /// The prefactor diverges as `p + p_r` approaches `p_th`.
    NearThreshold,
    /// The bound exceeded probability one and was reported as one.
    Clamped,
}

/// A probability bound stored as its base-10 logarithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogBound {
    pub log10_pe: f64,
    pub flags: Vec<BoundFlag>,
}

impl LogBound {
    fn trivial(flags: Vec<BoundFlag>) -> Self {
        Self { log10_pe: 0.0, flags }
    }

    pub fn probability(&self) -> f64 {
        10f64.powf(self.log10_pe)
    }
}

/// Logical error bound `C · n · ((p + p_r)/p_th)^{C'√n}` for an expander code
/// of `n` qubits, with
/// `C = [(1 - 2^{h(α)/α} p)(1 - ((p + p_r)/p_th)^α)]^{-1}`.
///
/// The first factor of `C` uses `p` alone, not `p + p_r`.
pub fn expander_logical_error(
    n: f64,
    p: f64,
    p_r: f64,
    consts: &ExpanderFamilyConstants,
) -> Result<LogBound, ModelError> {
    check_range("n", n, 1.0, f64::INFINITY, "[1, inf)")?;
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    check_range("p_r", p_r, 0.0, 1.0, "[0, 1]")?;
    let th = expander_threshold(consts)?;
    let total = p + p_r;
    if total == 0.0 {
        return Ok(LogBound {
            log10_pe: f64::NEG_INFINITY,
            flags: Vec::new(),
        });
    }
    let ln_ratio = total.ln() - th.p_th.ln();
    if ln_ratio >= 0.0 {
        return Ok(LogBound::trivial(vec![BoundFlag::AboveThreshold]));
    }
    let first = 1.0 - (consts.h_alpha / consts.alpha).exp2() * p;
    let second = -(consts.alpha * ln_ratio).exp_m1();
    if first <= 0.0 || second <= 0.0 {
        return Ok(LogBound::trivial(vec![BoundFlag::NearThreshold, BoundFlag::Clamped]));
    }
    let ln_c = -first.ln() - second.ln();
    let ln_bound = ln_c + n.ln() + consts.c_prime * n.sqrt() * ln_ratio;
    let log10 = ln_bound / std::f64::consts::LN_10;
    if log10 > 0.0 {
        let mut flags = Vec::new();
        if second < NEAR_THRESHOLD_MARGIN {
            flags.push(BoundFlag::NearThreshold);
        }
        flags.push(BoundFlag::Clamped);
        return Ok(LogBound::trivial(flags));
    }
    Ok(LogBound {
        log10_pe: log10,
        flags: Vec::new(),
    })
}

/// `1 - ((p + p_r)/p_th)^α` below this counts as near threshold.
const NEAR_THRESHOLD_MARGIN: f64 = 1e-6;

/// Block length beyond which the expander bound decreases in `n`:
/// `√n > 2 / (C' · ln(p_th / (p + p_r)))`.
pub fn expander_decay_crossover(p: f64, p_r: f64, consts: &ExpanderFamilyConstants) -> Result<f64, ModelError> {
    let th = expander_threshold(consts)?;
    let ln_inv = th.p_th.ln() - (p + p_r).ln();
    if ln_inv <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((2.0 / (consts.c_prime * ln_inv)).powi(2))
}

/// Union bound over `⌈T/τ⌉` refresh cycles, in log space, clamped at probability one.
pub fn multi_cycle_error(log10_pe_single: f64, total_time: f64, tau: f64) -> Result<f64, ModelError> {
    check_range("tau", tau, f64::MIN_POSITIVE, f64::INFINITY, "(0, inf)")?;
    check_range("T", total_time, 0.0, f64::INFINITY, "[0, inf)")?;
    Ok((log10_pe_single + cycle_count(total_time, tau).log10()).min(0.0))
}

/// `⌈T/τ⌉`, at least one. Ratios within a few ulps of an integer snap to it
/// so that `T = L·τ` gives exactly `L` cycles.
pub fn cycle_count(total_time: f64, tau: f64) -> f64 {
    let ratio = total_time / tau;
    let nearest = ratio.round();
    let cycles = if (ratio - nearest).abs() <= 4.0 * f64::EPSILON * nearest.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    cycles.max(1.0)
}

/// Empirical fit for bivariate bicycle memories:
/// `p^{d_circ/2} · exp(18.04 + 1337 p - 96007 p²)`.
pub fn bb_logical_error(p: f64, d_circ: u32) -> Result<f64, ModelError> {
    if !(p > 0.0 && p <= 0.1) {
        return Err(ModelError::OutOfRange {
            name: "p",
            value: p,
            range: "(0, 0.1]",
        });
    }
    let ln = f64::from(d_circ) / 2.0 * p.ln() + 18.04 + 1337.0 * p - 96007.0 * p * p;
    Ok(ln.exp())
}

/// Lower bound on recovery fidelity from a logical error probability.
pub fn fidelity_from_error(pe: f64) -> Result<f64, ModelError> {
    check_range("pe", pe, 0.0, 1.0, "[0, 1]")?;
    Ok(1.0 - pe)
}

/// Depolarizing parameter equivalent to local-stochastic parameter `p`.
pub fn depolarizing_from_local(p: f64) -> f64 {
    1.5 * p
}
