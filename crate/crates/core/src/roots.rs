//! Bracketed bisection on scalar functions that may themselves fail.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// f(x) at the returned point.
    pub fx: f64,
    pub iterations: usize,
}

/// Bisection settings. `x_tol = 0.0` bisects down to adjacent floats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for Bisection {
    fn default() -> Self {
        Self {
            x_tol: 1e-12,
            max_iter: 200,
        }
    }
}

impl Bisection {
    pub fn with_tolerance(x_tol: f64) -> Self {
        Self {
            x_tol,
            ..Self::default()
        }
    }

    /// Finds a sign change of `f` inside `[a, b]`. The endpoints may come in
    /// either order; `f(a)` and `f(b)` must not share a strict sign.
    ///
    /// Returns whichever final bracket endpoint has the smaller |f|.
    pub fn solve<F>(&self, mut f: F, a: f64, b: f64) -> Result<Root>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        let mut f_lo = f(lo)?;
        let mut f_hi = f(hi)?;
        if f_lo == 0.0 {
            return Ok(Root {
                x: lo,
                fx: f_lo,
                iterations: 0,
            });
        }
        if f_hi == 0.0 {
            return Ok(Root {
                x: hi,
                fx: f_hi,
                iterations: 0,
            });
        }
        if f_lo.signum() == f_hi.signum() {
            return Err(Error::ConvergenceFailure(format!(
                "no sign change on [{lo}, {hi}]: f = {f_lo}, {f_hi}"
            )));
        }
        let mut iterations = 0;
        while iterations < self.max_iter {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi || hi - lo <= self.x_tol {
                break;
            }
            iterations += 1;
            let f_mid = f(mid)?;
            if f_mid == 0.0 {
                return Ok(Root {
                    x: mid,
                    fx: 0.0,
                    iterations,
                });
            }
            if f_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
                f_hi = f_mid;
            }
        }
        if hi - lo > self.x_tol && iterations >= self.max_iter {
            return Err(Error::ConvergenceFailure(format!(
                "bracket [{lo}, {hi}] still wider than {} after {iterations} steps",
                self.x_tol
            )));
        }
        Ok(if f_lo.abs() <= f_hi.abs() {
            Root {
                x: lo,
                fx: f_lo,
                iterations,
            }
        } else {
            Root {
                x: hi,
                fx: f_hi,
                iterations,
            }
        })
    }
}

/// Walks from `start` in steps of `step` (either sign) for at most
/// `max_steps` steps and returns the first sub-interval over which `f`
/// changes sign, as `(previous, current)`.
pub fn scan_for_sign_change<F>(
    mut f: F,
    start: f64,
    step: f64,
    max_steps: usize,
) -> Result<Option<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut prev = start;
    let mut f_prev = f(start)?;
    for i in 1..=max_steps {
        let x = start + step * i as f64;
        let fx = f(x)?;
        if f_prev == 0.0 || f_prev.signum() != fx.signum() {
            return Ok(Some((prev, x)));
        }
        prev = x;
        f_prev = fx;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let root = Bisection::default()
            .solve(|x| Ok(x * x - 2.0), 0.0, 2.0)
            .unwrap();
        assert!((root.x - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn full_resolution_and_reversed_bracket() {
        let root = Bisection::with_tolerance(0.0)
            .solve(|x| Ok(x.cos()), 3.0, 1.0)
            .unwrap();
        assert!((root.x - std::f64::consts::FRAC_PI_2).abs() < 4e-16);
    }

    #[test]
    fn exact_endpoint_root() {
        let root = Bisection::default()
            .solve(|x| Ok(x - 1.0), 1.0, 5.0)
            .unwrap();
        assert_eq!((root.x, root.iterations), (1.0, 0));
    }

    #[test]
    fn rejects_missing_bracket() {
        let err = Bisection::default().solve(|x| Ok(x * x + 1.0), -1.0, 1.0);
        assert!(matches!(err, Err(Error::ConvergenceFailure(_))));
    }

    #[test]
    fn propagates_function_errors() {
        let err = Bisection::default().solve(|_| Err(Error::OutOfDomain(2.0)), 0.0, 1.0);
        assert_eq!(err, Err(Error::OutOfDomain(2.0)));
    }

    #[test]
    fn max_iter_is_enforced() {
        let b = Bisection {
            x_tol: 0.0,
            max_iter: 3,
        };
        assert!(b.solve(|x| Ok(x - 0.3), 0.0, 1.0).is_err());
    }

    #[test]
    fn scan_walks_backwards() {
        let hit = scan_for_sign_change(|x| Ok(x + 0.55), 0.0, -0.1, 20).unwrap();
        let (a, b) = hit.unwrap();
        assert!((a + 0.5).abs() < 1e-12 && (b + 0.6).abs() < 1e-12);
        assert!(scan_for_sign_change(|_| Ok(1.0), 0.0, 0.1, 5)
            .unwrap()
            .is_none());
    }
}
