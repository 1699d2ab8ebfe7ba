//! Shannon entropies in bits.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("entry {index} is {value}, probabilities must be finite and nonnegative")]
    Negative { index: usize, value: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
}

/// `-x log2 x`, with the convention `0 log 0 = 0`.
fn plogp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy `h2(x)`. Returns 0 outside the open unit interval.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    // (1-x) log2(1-x) through ln_1p so tiny x keeps its second-order term.
    plogp(x) - (1.0 - x) * (-x).ln_1p() / std::f64::consts::LN_2
}

/// `1 - h2(1/2 + t)` for `|t| <= 1/2`, without cancellation near `t = 0`.
pub fn binary_entropy_deficit(t: f64) -> f64 {
    let t = t.abs().min(0.5);
    if t == 0.5 {
        return 1.0;
    }
    let s = 2.0 * t;
    // (1+s) ln(1+s) + (1-s) ln(1-s) = sum_k s^{2k} / (k (2k-1))
    let sum = if s < 0.25 {
        let s2 = s * s;
        let mut power = s2;
        let mut acc = 0.0;
        for k in 1..=20u32 {
            let k = f64::from(k);
            acc += power / (k * (2.0 * k - 1.0));
            power *= s2;
        }
        acc
    } else {
        (1.0 + s) * s.ln_1p() + (1.0 - s) * (-s).ln_1p()
    };
    sum / (2.0 * std::f64::consts::LN_2)
}

/// Shannon entropy of a distribution. The entries must sum to one within 1e-9.
pub fn entropy(probs: &[f64]) -> Result<f64, EntropyError> {
    for (index, &value) in probs.iter().enumerate() {
        if !(value.is_finite() && value >= 0.0) {
            return Err(EntropyError::Negative { index, value });
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(EntropyError::NotNormalized(total));
    }
    Ok(probs.iter().map(|&x| plogp(x)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(entropy(&[0.25; 4]).unwrap(), 2.0);
        assert!(matches!(entropy(&[0.5, 0.6]), Err(EntropyError::NotNormalized(_))));
        assert!(matches!(entropy(&[1.5, -0.5]), Err(EntropyError::Negative { index: 1, .. })));
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5), 1.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.1) - 0.468_995_593_589_281_2).abs() < 1e-15);
    }

    #[test]
    fn deficit_matches_direct_form() {
        for &t in &[0.0, 1e-3, 0.1, 0.25, 0.4, 0.5] {
            let direct = 1.0 - binary_entropy(0.5 + t);
            assert!((binary_entropy_deficit(t) - direct).abs() < 1e-14, "t = {t}");
        }
        // Leading order 2t²/ln 2 where the direct form cancels to zero.
        let t = 1e-10;
        let lead = 2.0 * t * t / std::f64::consts::LN_2;
        assert!((binary_entropy_deficit(t) / lead - 1.0).abs() < 1e-9);
    }
}
