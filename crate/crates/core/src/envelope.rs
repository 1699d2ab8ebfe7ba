//! Lower convex envelope of sampled functions.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvelopeError {
    #[error("need at least two samples with matching lengths, got {xs} abscissae and {ys} values")]
    Shape { xs: usize, ys: usize },
    #[error("abscissae must be strictly increasing (index {0})")]
    Unsorted(usize),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
}

/// Greatest convex minorant of the points `(xs[i], ys[i])`, evaluated at
/// every `xs[i]`.
///
/// The lower hull comes from a monotone-chain pass; values between hull
/// vertices are linear interpolations.
pub fn convex_envelope(xs: &[f64], ys: &[f64]) -> Result<Vec<f64>, EnvelopeError> {
    let hull = lower_hull(xs, ys)?;
    let mut out = Vec::with_capacity(xs.len());
    let mut seg = 0;
    for (i, &x) in xs.iter().enumerate() {
        while seg + 1 < hull.len() - 1 && xs[hull[seg + 1]] <= x {
            seg += 1;
        }
        let (a, b) = (hull[seg], hull[(seg + 1).min(hull.len() - 1)]);
        if i == a || a == b {
            out.push(ys[a]);
        } else if i == b {
            out.push(ys[b]);
        } else {
            let t = (x - xs[a]) / (xs[b] - xs[a]);
            out.push(ys[a] + t * (ys[b] - ys[a]));
        }
    }
    Ok(out)
}

/// Indices of the lower-hull vertices, left to right.
pub fn lower_hull(xs: &[f64], ys: &[f64]) -> Result<Vec<usize>, EnvelopeError> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(EnvelopeError::Shape {
            xs: xs.len(),
            ys: ys.len(),
        });
    }
    for i in 0..xs.len() {
        if !xs[i].is_finite() || !ys[i].is_finite() {
            return Err(EnvelopeError::NonFinite(i));
        }
        if i > 0 && xs[i] <= xs[i - 1] {
            return Err(EnvelopeError::Unsorted(i));
        }
    }
    let mut hull: Vec<usize> = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop `a` unless o -> a -> i turns strictly counter-clockwise.
            let cross = (xs[a] - xs[o]) * (ys[i] - ys[o]) - (ys[a] - ys[o]) * (xs[i] - xs[o]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    Ok(hull)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convex_input_unchanged() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (x - 4.0) * (x - 4.0)).collect();
        assert_eq!(convex_envelope(&xs, &ys).unwrap(), ys);
    }

    #[test]
    fn tent_and_peak() {
        let xs = [0.0, 1.0, 2.0];
        assert_eq!(convex_envelope(&xs, &[1.0, 0.0, 1.0]).unwrap(), vec![1.0, 0.0, 1.0]);
        assert_eq!(convex_envelope(&xs, &[0.0, 1.0, 0.0]).unwrap(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn collinear_points_keep_values() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [3.0, 2.0, 1.0, 0.0];
        assert_eq!(convex_envelope(&xs, &ys).unwrap(), ys.to_vec());
        assert_eq!(lower_hull(&xs, &ys).unwrap(), vec![0, 3]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(convex_envelope(&[0.0], &[1.0]), Err(EnvelopeError::Shape { .. })));
        assert!(matches!(
            convex_envelope(&[0.0, 0.0], &[1.0, 1.0]),
            Err(EnvelopeError::Unsorted(1))
        ));
        assert!(matches!(
            convex_envelope(&[0.0, 1.0], &[1.0, f64::NAN]),
            Err(EnvelopeError::NonFinite(1))
        ));
    }
}
