//! Upper bounds on the storage capacity of classical memories built from
//! noisy two-input gates.
//!
//! Each gate erases entropy; the refined bound maximizes that dissipation
//! over a family of gate input distributions instead of fixing the uniform
//! input.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::binary_entropy;
use crate::search::{golden_section_max, grid_argmax};

/// Grid size of the inner maximization.
pub const DELTA_H_GRID: usize = 1024;
/// Golden-section tolerance of the inner maximization, in `p`.
pub const DELTA_H_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicalError {
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("figure grid needs at least 2 points, got {0}")]
    Grid(usize),
}

fn check(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<(), ClassicalError> {
    if value.is_nan() || value < lo || value > hi {
        Err(ClassicalError::OutOfRange { name, value, range })
    } else {
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<(), ClassicalError> {
    check("alpha", alpha, 0.0, 0.5, "[0, 1/2]")
}

/// Capacity of a binary symmetric channel with flip probability `alpha`.
pub fn bsc_capacity(alpha: f64) -> f64 {
    1.0 - binary_entropy(alpha)
}

fn delta_h_unchecked(alpha: f64, p: f64) -> f64 {
    binary_entropy(p) + (1.0 - p) * 3f64.log2() - binary_entropy(alpha + p - 2.0 * alpha * p)
}

/// Entropy removed by a noisy gate whose four inputs have probabilities
/// `(p, (1-p)/3, (1-p)/3, (1-p)/3)` and whose output flips with
/// probability `alpha`.
pub fn delta_h(alpha: f64, p: f64) -> Result<f64, ClassicalError> {
    check_alpha(alpha)?;
    check("p", p, 0.0, 1.0, "[0, 1]")?;
    Ok(delta_h_unchecked(alpha, p))
}

/// Maximum of [`delta_h`] over `p`, returned as `(p_star, value)`.
pub fn delta_h_star(alpha: f64) -> Result<(f64, f64), ClassicalError> {
    check_alpha(alpha)?;
    let f = |p: f64| delta_h_unchecked(alpha, p);
    let grid: Vec<f64> = (0..DELTA_H_GRID).map(|i| i as f64 / (DELTA_H_GRID - 1) as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&p| f(p)).collect();
    let i = grid_argmax(&values).expect("finite objective");
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let g = golden_section_max(f, lo, hi, DELTA_H_TOL);
    if g.value >= values[i] {
        Ok((g.x, g.value))
    } else {
        Ok((grid[i], values[i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Dissipation maximized over the input distribution.
    New,
    /// Dissipation at the uniform input, `2 - h2(α/2 + 1/4)`.
    Old,
}

/// Storage-capacity upper bound with a caller-supplied gate capacity.
pub fn classical_ub_with<C: Fn(f64) -> f64>(alpha: f64, variant: Variant, capacity: C) -> Result<f64, ClassicalError> {
    check_alpha(alpha)?;
    let h = binary_entropy(alpha);
    let dissipation = match variant {
        Variant::New => delta_h_star(alpha)?.1,
        Variant::Old => 2.0 - binary_entropy(alpha / 2.0 + 0.25),
    };
    Ok(capacity(alpha) / (1.0 + h / dissipation))
}

/// [`classical_ub_with`] using the binary symmetric channel capacity.
pub fn classical_ub(alpha: f64, variant: Variant) -> Result<f64, ClassicalError> {
    classical_ub_with(alpha, variant, bsc_capacity)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalBoundPoint {
    pub alpha: f64,
    pub p_star: f64,
    pub delta_h_star: f64,
    pub ub_new: f64,
    pub ub_old: f64,
}

impl ClassicalBoundPoint {
    pub fn at(alpha: f64) -> Result<Self, ClassicalError> {
        let (p_star, dh) = delta_h_star(alpha)?;
        let h = binary_entropy(alpha);
        let c = bsc_capacity(alpha);
        Ok(Self {
            alpha,
            p_star,
            delta_h_star: dh,
            ub_new: c / (1.0 + h / dh),
            ub_old: classical_ub(alpha, Variant::Old)?,
        })
    }

    pub fn gap(&self) -> f64 {
        self.ub_new - self.ub_old
    }
}

/// Both bounds on a uniform `alpha` grid over `[0, 1/2]`.
pub fn figure3_data(grid: usize) -> Result<Vec<ClassicalBoundPoint>, ClassicalError> {
    if grid < 2 {
        return Err(ClassicalError::Grid(grid));
    }
    (0..grid)
        .into_par_iter()
        .map(|i| ClassicalBoundPoint::at(0.5 * i as f64 / (grid - 1) as f64))
        .collect()
}
