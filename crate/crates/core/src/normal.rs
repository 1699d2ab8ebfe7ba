//! Standard normal distribution helpers, accurate far into the lower tail.

use libm::erfc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("probability {0} is outside the open interval (0, 1)")]
pub struct QuantileDomainError(pub f64);

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// `Φ(x)` through the complementary error function, so lower-tail values
/// keep full relative precision.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Acklam's rational approximation, relative error about 1e-9.
fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// `Φ⁻¹(p)` for `p ∈ (0, 1)`.
///
/// Lower-half inputs are solved directly: an Acklam starting point followed
/// by Halley steps on `ln Φ(x) - ln p`, which stays well conditioned down to
/// `p ≈ 1e-300`. Upper-half inputs use `Φ⁻¹(p) = -Φ⁻¹(1 - p)`.
pub fn inverse_normal_cdf(p: f64) -> Result<f64, QuantileDomainError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(QuantileDomainError(p));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    if p > 0.5 {
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    let target = p.ln();
    let mut x = acklam(p);
    for _ in 0..4 {
        let cdf = normal_cdf(x);
        let pdf = normal_pdf(x);
        if cdf <= 0.0 || pdf <= 0.0 {
            break;
        }
        let f = cdf.ln() - target;
        // d/dx ln Φ = m, d²/dx² ln Φ = -m (x + m), with m = φ/Φ.
        let m = pdf / cdf;
        let step = f / m / (1.0 + f * (x + m) / (2.0 * m));
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn center_and_symmetry() {
        assert_eq!(inverse_normal_cdf(0.5).unwrap(), 0.0);
        let a = inverse_normal_cdf(0.975).unwrap();
        let b = inverse_normal_cdf(0.025).unwrap();
        assert!((a + b).abs() < 1e-14);
        assert!((a - 1.959_963_984_540_054).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        for p in [0.0, 1.0, -0.1, 1.1, f64::NAN] {
            assert!(inverse_normal_cdf(p).is_err());
        }
    }

    #[test]
    fn deep_tail_is_finite_and_consistent() {
        let x = inverse_normal_cdf(1e-300).unwrap();
        assert!(x.is_finite() && x < -37.0 && x > -37.5);
        assert!((normal_cdf(x) / 1e-300 - 1.0).abs() < 1e-12);
    }
}
