//! Sampling the three continuous oracle-call curves over a θ grid.

use serde::Serialize;

use crate::closed_form::{continuous_calls, MemberKind};
use crate::error::{Error, Result};

/// Continuous call counts at one θ. Degenerate points hold NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub c_even: f64,
    pub c_odd: f64,
    pub c_grover: f64,
}

impl SweepRow {
    pub fn at(beta: f64, theta: f64) -> Self {
        let c = |m| continuous_calls(m, beta, theta).unwrap_or(f64::NAN);
        Self {
            theta,
            c_even: c(MemberKind::EvenA2n),
            c_odd: c(MemberKind::OddA2n1),
            c_grover: c(MemberKind::GroverGn),
        }
    }

    pub fn value(&self, member: MemberKind) -> f64 {
        match member {
            MemberKind::EvenA2n => self.c_even,
            MemberKind::OddA2n1 => self.c_odd,
            MemberKind::GroverGn => self.c_grover,
        }
    }
}

/// `steps` equally spaced points from `min` to `max` inclusive.
pub fn theta_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidInput(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Error::InvalidInput(format!(
            "theta range must satisfy min < max, got [{min}, {max}]"
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                max
            } else {
                min + (max - min) * i as f64 / last
            }
        })
        .collect())
}

/// Evaluates every grid point. β must lie in (0, π/2].
pub fn sweep(beta: f64, grid: &[f64]) -> Result<Vec<SweepRow>> {
    if !beta.is_finite() || beta <= 0.0 || beta > std::f64::consts::FRAC_PI_2 {
        return Err(Error::InvalidInput(format!(
            "beta must lie in (0, pi/2], got {beta}"
        )));
    }
    Ok(grid.iter().map(|&t| SweepRow::at(beta, t)).collect())
}

/// Index of the grid point nearest `target`.
pub fn nearest_index(grid: &[f64], target: f64) -> Option<usize> {
    grid.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .map(|(i, _)| i)
}
