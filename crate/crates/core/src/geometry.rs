//! Search instances and phase settings.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::closed_form::MemberKind;
use crate::error::{Error, Result};
use crate::operator::StateVec2;

const TWO_PI: f64 = 2.0 * PI;

/// The search instance: the angle β with sin β = √(M/N), optionally
/// remembering the concrete item counts it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    beta: f64,
    n_items: Option<u64>,
    n_marked: Option<u64>,
}

impl Geometry {
    /// Builds a geometry from β directly. β must lie in (0, π/2].
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 || beta > FRAC_PI_2 {
            return Err(Error::InvalidInput(format!(
                "beta must lie in (0, pi/2], got {beta}"
            )));
        }
        Ok(Self {
            beta,
            n_items: None,
            n_marked: None,
        })
    }

    /// Builds a geometry from N items of which M are marked.
    pub fn from_counts(n_items: u64, n_marked: u64) -> Result<Self> {
        if n_marked == 0 || n_items == 0 || n_marked > n_items {
            return Err(Error::InvalidInput(format!(
                "need 1 <= M <= N, got N = {n_items}, M = {n_marked}"
            )));
        }
        Ok(Self {
            beta: beta_from_counts(n_items, n_marked),
            n_items: Some(n_items),
            n_marked: Some(n_marked),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_items(&self) -> Option<u64> {
        self.n_items
    }

    pub fn n_marked(&self) -> Option<u64> {
        self.n_marked
    }

    pub fn sin_beta(&self) -> f64 {
        self.beta.sin()
    }

    pub fn cos_beta(&self) -> f64 {
        self.beta.cos()
    }

    /// The uniform superposition sin β |τ⟩ + cos β |τ⊥⟩.
    pub fn initial_state(&self) -> StateVec2 {
        StateVec2::real(self.sin_beta(), self.cos_beta())
    }
}

/// β = arcsin √(M/N). Every full-space run derives β through this function.
pub fn beta_from_counts(n_items: u64, n_marked: u64) -> f64 {
    (n_marked as f64 / n_items as f64).sqrt().asin()
}

/// The two phase angles: φ on the marked state, θ on the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConfig {
    pub phi: f64,
    pub theta: f64,
}

impl PhaseConfig {
    pub fn new(phi: f64, theta: f64) -> Result<Self> {
        for (name, v) in [("phi", phi), ("theta", theta)] {
            if !v.is_finite() || v <= -TWO_PI || v >= TWO_PI {
                return Err(Error::InvalidInput(format!(
                    "{name} must lie in (-2pi, 2pi), got {v}"
                )));
            }
        }
        Ok(Self { phi, theta })
    }

    /// Phases obeying the member's matching condition: φ = −θ for the even
    /// member, φ = θ otherwise.
    pub fn matched(member: MemberKind, theta: f64) -> Result<Self> {
        Self::new(member.matched_phi(theta), theta)
    }

    pub fn is_matched(&self, member: MemberKind) -> bool {
        (self.phi - member.matched_phi(self.theta)).abs() < 1e-14
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_give_exact_beta() {
        let g = Geometry::from_counts(4, 1).unwrap();
        assert_eq!(g.beta(), 0.5f64.asin());
        assert!((g.beta() - PI / 6.0).abs() < 1e-15);
        assert_eq!(g.n_items(), Some(4));
        let all = Geometry::from_counts(7, 7).unwrap();
        assert_eq!(all.sin_beta(), 1.0);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(Geometry::from_beta(0.0).is_err());
        assert!(Geometry::from_beta(2.0).is_err());
        assert!(Geometry::from_beta(f64::NAN).is_err());
        assert!(Geometry::from_counts(4, 0).is_err());
        assert!(Geometry::from_counts(4, 5).is_err());
        assert!(PhaseConfig::new(7.0, 0.0).is_err());
        assert!(PhaseConfig::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn matching_predicate() {
        let even = PhaseConfig::matched(MemberKind::EvenA2n, 1.2).unwrap();
        assert_eq!(even.phi, -1.2);
        assert!(even.is_matched(MemberKind::EvenA2n));
        assert!(!even.is_matched(MemberKind::OddA2n1));
        let odd = PhaseConfig::matched(MemberKind::OddA2n1, 1.2).unwrap();
        assert!(odd.is_matched(MemberKind::GroverGn));
    }
}
