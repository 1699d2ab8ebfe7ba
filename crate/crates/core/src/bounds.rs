//! Converse bounds on quantum storage capacity.
//!
//! Every bound is returned as a [`BoundResult`] that records which formula
//! won. Values are rates in qubits per component. Close to one, `1 - value`
//! loses all precision in f64, so each result also carries `gap = 1 - value`
//! computed without cancellation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::{binary_entropy, binary_entropy_deficit};
use crate::envelope::{lower_hull, EnvelopeError};
use crate::normal::{inverse_normal_cdf, QuantileDomainError};

/// Default number of grid points for envelope evaluation.
pub const DEFAULT_ENVELOPE_POINTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("envelope grid needs at least 2 points, got {0}")]
    Grid(usize),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Quantile(#[from] QuantileDomainError),
}

fn check(name: &'static str, value: f64, ok: bool, range: &'static str) -> Result<(), BoundError> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(BoundError::OutOfRange { name, value, range })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `1 - h2(p)`
    Hashing,
    /// `h2((1+γ)/2) - h2(γ/2)`
    DegradableExt,
    /// `1 - 4p`
    NoCloning,
    /// Dephasing capacity with dispersion and `log n / 2n` corrections.
    SecondOrder,
    Dissipation,
    OneShot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundNote {
    /// A negative value was reported as zero.
    ClampedNegative,
    /// Valid but loose: the bound exceeds one.
    ExceedsOne,
    /// `q_cap = 1` with no dissipation; reported as zero.
    DegenerateDenominator,
}

/// How the three-branch minimum is combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum HullMode {
    #[default]
    PointwiseMin,
    /// Lower convex envelope of the pointwise minimum, sampled on a uniform
    /// grid of `points` over the parameter domain with the query point added.
    ConvexEnvelope { points: usize },
}

impl HullMode {
    pub fn envelope() -> Self {
        HullMode::ConvexEnvelope {
            points: DEFAULT_ENVELOPE_POINTS,
        }
    }
}

/// Base of the logarithm in the `log n / 2n` finite-size term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    #[default]
    Two,
    Natural,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::Natural => x.ln(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_tilde: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_cap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: f64,
    /// `1 - value`, accurate even when `value` rounds to one.
    pub gap: f64,
    pub branch: Branch,
    pub inputs: BoundInputs,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<BoundNote>,
}

/// A branch value stored through its gap from one.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    gap: f64,
    branch: Branch,
}

impl Candidate {
    fn value(self) -> f64 {
        1.0 - self.gap
    }
}

fn smallest(cands: &[Candidate]) -> Candidate {
    // Largest gap is the smallest value; earlier branches win ties.
    *cands
        .iter()
        .reduce(|best, c| if c.gap > best.gap { c } else { best })
        .expect("at least one branch")
}

/// `γ(p) = 4(√(1-p) - 1 + p)`.
pub fn gamma_fn(p_tilde: f64) -> Result<f64, BoundError> {
    check("p_tilde", p_tilde, (0.0..=1.0).contains(&p_tilde), "[0, 1]")?;
    Ok(gamma_unchecked(p_tilde))
}

fn gamma_unchecked(p: f64) -> f64 {
    // √(1-p) - 1 = -p / (√(1-p) + 1), so γ = 4p (1 - 1/(1 + √(1-p))).
    let root = (1.0 - p).sqrt();
    4.0 * p * root / (1.0 + root)
}

fn hashing(p: f64) -> Candidate {
    Candidate {
        gap: binary_entropy(p),
        branch: Branch::Hashing,
    }
}

fn degradable_ext(p: f64) -> Candidate {
    let g = gamma_unchecked(p);
    Candidate {
        gap: binary_entropy(g / 2.0) + binary_entropy_deficit(g / 2.0),
        branch: Branch::DegradableExt,
    }
}

fn no_cloning(p: f64) -> Candidate {
    Candidate {
        gap: 4.0 * p,
        branch: Branch::NoCloning,
    }
}

fn capacity_candidate(p: f64) -> Candidate {
    smallest(&[hashing(p), degradable_ext(p), no_cloning(p)])
}

/// Evaluates the lower convex envelope of `f` at `x`, sampling `f` on a
/// uniform grid over `[lo, hi]` together with `x` itself.
fn envelope_at<F>(x: f64, lo: f64, hi: f64, points: usize, f: F) -> Result<(f64, Branch), BoundError>
where
    F: Fn(f64) -> Candidate,
{
    if points < 2 {
        return Err(BoundError::Grid(points));
    }
    let step = (hi - lo) / (points - 1) as f64;
    let mut xs: Vec<f64> = (0..points).map(|i| lo + step * i as f64).collect();
    xs[points - 1] = hi;
    let at = xs.partition_point(|&g| g < x);
    if xs.get(at) != Some(&x) {
        xs.insert(at, x);
    }
    let cands: Vec<Candidate> = xs.iter().map(|&g| f(g)).collect();
    let ys: Vec<f64> = cands.iter().map(|c| c.value()).collect();
    let hull = lower_hull(&xs, &ys)?;
    let seg = hull.partition_point(|&h| xs[h] <= x).saturating_sub(1);
    let a = hull[seg];
    if a == at || seg + 1 == hull.len() {
        return Ok((ys[a], cands[a].branch));
    }
    let b = hull[seg + 1];
    let t = (x - xs[a]) / (xs[b] - xs[a]);
    Ok((ys[a] + t * (ys[b] - ys[a]), cands[a].branch))
}

/// Upper bound on the quantum capacity of the depolarizing channel: the
/// minimum (or its convex envelope) of the hashing, degradable-extension and
/// no-cloning branches.
pub fn depolarizing_capacity_ub(p_tilde: f64, mode: HullMode) -> Result<BoundResult, BoundError> {
    check("p_tilde", p_tilde, (0.0..=0.25).contains(&p_tilde), "[0, 1/4]")?;
    let inputs = BoundInputs {
        p_tilde: Some(p_tilde),
        ..Default::default()
    };
    let (value, gap, branch) = match mode {
        HullMode::PointwiseMin => {
            let c = capacity_candidate(p_tilde);
            (c.value(), c.gap, c.branch)
        }
        HullMode::ConvexEnvelope { points } => {
            let (v, b) = envelope_at(p_tilde, 0.0, 0.25, points, capacity_candidate)?;
            // The envelope touches the minimum at p = 0, where every branch is 1.
            let gap = if p_tilde == 0.0 { 0.0 } else { 1.0 - v };
            (v, gap, b)
        }
    };
    Ok(BoundResult {
        value: value.max(0.0),
        gap: gap.min(1.0),
        branch,
        inputs,
        notes: Vec::new(),
    })
}

/// Entropy a `U`-outcome ζ-noisy projective measurement can dissipate:
/// `log2 U - H(1 + ζ - Uζ, ζ, …, ζ)`.
pub fn dissipation_entropy(u: u32, zeta: f64) -> Result<f64, BoundError> {
    check("U", f64::from(u), u >= 2, "[2, inf)")?;
    let uf = f64::from(u);
    check("zeta", zeta, (0.0..=1.0 / uf).contains(&zeta), "[0, 1/U]")?;
    let head = 1.0 + zeta - uf * zeta;
    let plogp = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    let h = plogp(head) + (uf - 1.0) * plogp(zeta);
    Ok((uf.log2() - h).max(0.0))
}

/// `q · H / (1 + H - q)` given `q`, its gap `1 - q`, and `H`.
/// Returns `(value, gap, degenerate)`.
fn dissipation_from_gap(q: f64, q_gap: f64, h_dis: f64) -> (f64, f64, bool) {
    let denom = q_gap + h_dis;
    if denom <= 0.0 {
        return (0.0, 1.0, true);
    }
    let gap = q_gap * (1.0 + h_dis) / denom;
    let value = q * h_dis / denom;
    (value, gap, false)
}

/// Storage-capacity bound from a communication capacity `q_cap` and the
/// dissipation capacity of the available measurements. For `U = 2` this is
/// `q (1 - h2(ζ)) / (2 - h2(ζ) - q)`.
pub fn dissipation_bound(q_cap: f64, u: u32, zeta: f64) -> Result<BoundResult, BoundError> {
    check("q_cap", q_cap, (0.0..=1.0).contains(&q_cap), "[0, 1]")?;
    let h = dissipation_entropy(u, zeta)?;
    let (value, gap, degenerate) = dissipation_from_gap(q_cap, 1.0 - q_cap, h);
    Ok(BoundResult {
        value,
        gap,
        branch: Branch::Dissipation,
        inputs: BoundInputs {
            q_cap: Some(q_cap),
            zeta: Some(zeta),
            u: Some(u),
            ..Default::default()
        },
        notes: if degenerate {
            vec![BoundNote::DegenerateDenominator]
        } else {
            Vec::new()
        },
    })
}

/// Qudit variant with `log2 d` in place of one bit:
/// `q H / (log2 d + H - q)`.
pub fn dissipation_bound_qudit(q_cap: f64, log2_d: f64, h_dis: f64) -> Result<f64, BoundError> {
    check("log2_d", log2_d, log2_d > 0.0, "(0, inf)")?;
    check("q_cap", q_cap, (0.0..=log2_d).contains(&q_cap), "[0, log2 d]")?;
    check("h_dis", h_dis, h_dis >= 0.0, "[0, inf)")?;
    let denom = log2_d + h_dis - q_cap;
    if denom <= 0.0 {
        return Ok(0.0);
    }
    Ok(q_cap * h_dis / denom)
}

/// Depolarizing capacity bound tightened by binary ζ-noisy measurements:
/// `Q_ub (1 - h2(ζ)) / (2 - h2(ζ) - Q_ub)`.
pub fn depolarizing_dissipation_ub(p_tilde: f64, zeta: f64, mode: HullMode) -> Result<BoundResult, BoundError> {
    check("p_tilde", p_tilde, (0.0..=0.25).contains(&p_tilde), "[0, 1/4]")?;
    check("zeta", zeta, (0.0..=0.5).contains(&zeta), "[0, 1/2]")?;
    let q = depolarizing_capacity_ub(p_tilde, mode)?;
    let h = 1.0 - binary_entropy(zeta);
    let (value, gap, degenerate) = dissipation_from_gap(q.value, q.gap, h);
    Ok(BoundResult {
        value,
        gap,
        branch: Branch::Dissipation,
        inputs: BoundInputs {
            p_tilde: Some(p_tilde),
            zeta: Some(zeta),
            u: Some(2),
            ..Default::default()
        },
        notes: if degenerate {
            vec![BoundNote::DegenerateDenominator]
        } else {
            Vec::new()
        },
    })
}

/// Dispersion of the qubit dephasing channel (equivalently the binary
/// symmetric channel): `p(1-p) log2²((1-p)/p)`. Zero at the endpoints.
pub fn dephasing_dispersion(p_tilde: f64) -> f64 {
    if p_tilde <= 0.0 || p_tilde >= 1.0 {
        return 0.0;
    }
    let l = ((1.0 - p_tilde) / p_tilde).log2();
    p_tilde * (1.0 - p_tilde) * l * l
}

fn second_order_candidate(p: f64, n: f64, z: f64, base: LogBase) -> Candidate {
    let first = Candidate {
        gap: binary_entropy(p) - (dephasing_dispersion(p) / n).sqrt() * z - base.log(n) / (2.0 * n),
        branch: Branch::SecondOrder,
    };
    smallest(&[first, degradable_ext(p), no_cloning(p)])
}

/// Finite-blocklength bound for `n` qubits under depolarizing noise with
/// target infidelity `eps`. The first branch is the dephasing capacity plus
/// its normal-approximation correction and `log n / 2n`; the `O(1/n)` term is
/// dropped since its constant is negative.
pub fn second_order_bound(
    p_tilde: f64,
    n: f64,
    eps: f64,
    mode: HullMode,
    base: LogBase,
) -> Result<BoundResult, BoundError> {
    check("p_tilde", p_tilde, p_tilde > 0.0 && p_tilde <= 0.25, "(0, 1/4]")?;
    check("n", n, n >= 1.0 && n.is_finite(), "[1, inf)")?;
    let z = inverse_normal_cdf(eps)?;
    let (value, gap, branch) = match mode {
        HullMode::PointwiseMin => {
            let c = second_order_candidate(p_tilde, n, z, base);
            (c.value(), c.gap, c.branch)
        }
        HullMode::ConvexEnvelope { points } => {
            let (v, b) = envelope_at(p_tilde, 0.0, 0.25, points, |p| second_order_candidate(p, n, z, base))?;
            (v, 1.0 - v, b)
        }
    };
    let mut notes = Vec::new();
    let (value, gap) = if value < 0.0 {
        notes.push(BoundNote::ClampedNegative);
        (0.0, 1.0)
    } else {
        (value, gap)
    };
    Ok(BoundResult {
        value,
        gap,
        branch,
        inputs: BoundInputs {
            p_tilde: Some(p_tilde),
            n: Some(n),
            eps: Some(eps),
            ..Default::default()
        },
        notes,
    })
}

/// One-shot converse `(q_cap + h2(eps)/n) / (1 - 2 eps)`. Not clamped.
pub fn one_shot_bound(q_cap: f64, n: f64, eps: f64) -> Result<BoundResult, BoundError> {
    check("q_cap", q_cap, q_cap >= 0.0, "[0, inf)")?;
    check("n", n, n >= 1.0, "[1, inf)")?;
    check("eps", eps, (0.0..0.5).contains(&eps), "[0, 1/2)")?;
    let value = (q_cap + binary_entropy(eps) / n) / (1.0 - 2.0 * eps);
    Ok(BoundResult {
        value,
        gap: 1.0 - value,
        branch: Branch::OneShot,
        inputs: BoundInputs {
            q_cap: Some(q_cap),
            n: Some(n),
            eps: Some(eps),
            ..Default::default()
        },
        notes: if value > 1.0 {
            vec![BoundNote::ExceedsOne]
        } else {
            Vec::new()
        },
    })
}
