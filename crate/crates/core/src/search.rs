//! One-dimensional maximization helpers: grid argmax and golden-section search.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Index of the largest finite value; the smallest index wins ties.
pub fn grid_argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            continue;
        }
        match best {
            Some(b) if values[b] >= v => {}
            _ => best = Some(i),
        }
    }
    best
}

/// `count` points spaced uniformly in log between `lo` and `hi` (both > 0).
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && count >= 1);
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut out: Vec<f64> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect();
    out[0] = lo;
    out[count - 1] = hi;
    out
}

/// One bracket of a golden-section run.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub best_x: f64,
    pub best_f: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub value: f64,
    pub history: Vec<Bracket>,
}

/// Golden-section maximization of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol · max(1, |x|)`.
///
/// The endpoints are evaluated too and returned if they beat the interior,
/// so a monotone `f` yields the boundary.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> GoldenResult {
    assert!(hi >= lo && tol > 0.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut history = Vec::new();
    for _ in 0..500 {
        if (b - a) <= tol * c.abs().max(1.0) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        let (best_x, best_f) = if fc >= fd { (c, fc) } else { (d, fd) };
        history.push(Bracket { lo: a, hi: b, best_x, best_f });
    }
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    GoldenResult {
        x: best.0,
        value: best.1,
        history,
    }
}
