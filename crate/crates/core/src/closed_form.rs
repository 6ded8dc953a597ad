//! Closed-form iteration and oracle-call counts for the three members.
//!
//! Each count function returns the continuous iteration number `f` at which
//! the residual amplitude ⟨τ⊥|A|s⟩ vanishes, under the member's matching
//! condition. Integer plans come from [`ceiling_policy`] and the parity rules
//! in [`oracle_calls`].

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PhaseConfig;
use crate::operator::{polar_r_gamma, SpectralData};

/// Values within this of ±1 are clipped before arcsin/arccos.
pub const CLIP_TOL: f64 = 1e-12;
/// Rotation angles below this make a count function blow up.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-14;
/// A continuous count this close to an integer is taken as that integer.
pub const SNAP_TOL: f64 = 1e-9;

/// Which member of the family runs the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MemberKind {
    /// `A₂ₙ = (I_s† I_τ† I_s I_τ)ⁿ`, matched by φ = −θ.
    #[serde(rename = "even")]
    EvenA2n,
    /// `A₂ₙ₊₁ = G A₂ₙ`, matched by φ = θ.
    #[serde(rename = "odd")]
    OddA2n1,
    /// `Gⁿ`, matched by φ = θ.
    #[serde(rename = "grover")]
    GroverGn,
}

impl MemberKind {
    pub const ALL: [MemberKind; 3] = [Self::EvenA2n, Self::OddA2n1, Self::GroverGn];

    pub fn matched_phi(self, theta: f64) -> f64 {
        match self {
            Self::EvenA2n => -theta,
            Self::OddA2n1 | Self::GroverGn => theta,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::EvenA2n => "even",
            Self::OddA2n1 => "odd",
            Self::GroverGn => "grover",
        }
    }

    /// Oracle calls spent by `n` iterations of this member.
    pub fn calls_for_iterations(self, n: u64) -> u64 {
        match self {
            Self::EvenA2n => 2 * n,
            Self::OddA2n1 => 2 * n + 1,
            Self::GroverGn => n,
        }
    }

    /// Iterations implied by a call count; `None` when the parity is wrong.
    pub fn iterations_for_calls(self, calls: u64) -> Option<u64> {
        match self {
            Self::EvenA2n => calls.is_multiple_of(2).then_some(calls / 2),
            Self::OddA2n1 => (calls % 2 == 1).then_some(calls / 2),
            Self::GroverGn => Some(calls),
        }
    }
}

impl fmt::Display for MemberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MemberKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Self::EvenA2n),
            "odd" => Ok(Self::OddA2n1),
            "grover" => Ok(Self::GroverGn),
            other => Err(Error::InvalidInput(format!(
                "unknown member {other:?}; expected even, odd or grover"
            ))),
        }
    }
}

/// One evaluation of a member's count rule at (β, θ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountEval {
    pub member: MemberKind,
    pub beta: f64,
    pub theta: f64,
    pub f_value: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// Phase offset of the even-member condition; `None` for the others.
    pub delta_e: Option<f64>,
    pub n_iterations: u64,
    pub oracle_calls: u64,
}

/// A continuous count split into its angle numerator and rotation denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountParts {
    pub numerator: f64,
    pub denominator: f64,
}

impl CountParts {
    pub fn value(&self) -> f64 {
        self.numerator / self.denominator
    }
}

fn clip_unit(v: f64) -> Result<f64> {
    if !v.is_finite() || v.abs() > 1.0 + CLIP_TOL {
        return Err(Error::OutOfDomain(v));
    }
    Ok(v.clamp(-1.0, 1.0))
}

fn check_inputs(beta: f64, theta: f64) -> Result<()> {
    if !beta.is_finite() || beta <= 0.0 || beta > FRAC_PI_2 {
        return Err(Error::InvalidInput(format!(
            "beta must lie in (0, pi/2], got {beta}"
        )));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "theta must be finite, got {theta}"
        )));
    }
    Ok(())
}

/// Shared trigonometric pieces at matched phases.
struct Matched {
    beta: f64,
    theta: f64,
    /// sin²(θ/2)
    st2: f64,
    /// sin²(2β)
    s2b2: f64,
    /// Block rotation angle w.
    w: f64,
}

impl Matched {
    fn new(beta: f64, theta: f64) -> Result<Self> {
        check_inputs(beta, theta)?;
        let st2 = (theta / 2.0).sin().powi(2);
        let s2b = (2.0 * beta).sin();
        // arccos(1 − 2 sin⁴(θ/2) sin²2β), written as 2 arcsin(sin²(θ/2)|sin 2β|)
        // to keep relative precision when the angle is small.
        let w = 2.0 * (st2 * s2b.abs()).min(1.0).asin();
        let m = Self {
            beta,
            theta,
            st2,
            s2b2: s2b * s2b,
            w,
        };
        if w < DEGENERATE_DENOMINATOR {
            return Err(m.degenerate());
        }
        Ok(m)
    }

    fn degenerate(&self) -> Error {
        Error::DegenerateAngle {
            beta: self.beta,
            theta: self.theta,
        }
    }

    /// √(1 − sin²(θ/2) sin²2β); vanishes only where the block is −I.
    fn mixing_root(&self) -> Result<f64> {
        let v = 1.0 - self.st2 * self.s2b2;
        if v < DEGENERATE_DENOMINATOR {
            return Err(self.degenerate());
        }
        Ok(v.sqrt())
    }
}

pub fn f_even_parts(beta: f64, theta: f64) -> Result<CountParts> {
    let m = Matched::new(beta, theta)?;
    let root = m.mixing_root()?;
    let arg = beta.sin() * (1.0 - 2.0 * m.st2 * beta.cos().powi(2)) / root;
    Ok(CountParts {
        numerator: FRAC_PI_2 + clip_unit(arg)?.asin(),
        denominator: m.w,
    })
}

/// Continuous iteration count of the even member, φ = −θ.
pub fn f_even(beta: f64, theta: f64) -> Result<f64> {
    f_even_parts(beta, theta).map(|p| p.value())
}

/// Sign of the sin(nw) coefficient in the odd member's residual condition at
/// φ = θ, up to the positive factor sin w.
///
/// The arccos in the odd count only sees the cosine of the phase offset; this
/// coefficient carries its sine.
fn odd_quadrature_sine(beta: f64, theta: f64) -> f64 {
    let (sb, cb) = beta.sin_cos();
    let (sh, ch) = (theta / 2.0).sin_cos();
    let s2b = (2.0 * beta).sin();
    let (r, gamma) = polar_r_gamma(theta, beta);
    // sin w · cos 2x and sin w · sin 2x at φ = θ
    let cos2x = sh * sh * theta.sin() * s2b * s2b;
    let sin2x = 2.0 * r * sh * sh * s2b;
    -4.0 * cos2x * sh * ch * sb * sb * cb
        - sin2x * ((gamma + theta / 2.0).cos() + 4.0 * gamma.sin() * sh * cb * cb) * sb
}

pub fn f_odd_parts(beta: f64, theta: f64) -> Result<CountParts> {
    let m = Matched::new(beta, theta)?;
    let root = m.mixing_root()?;
    let outer = 1.0 - m.st2 * m.st2 * m.s2b2;
    debug_assert!(outer >= 0.0, "1 - sin^4(theta/2) sin^2(2 beta) = {outer}");
    let x = beta.cos() * (1.0 - 4.0 * m.st2 * beta.sin().powi(2)) * outer.max(0.0).sqrt() / root;
    let acos_x = clip_unit(x)?.acos();
    // Phase offset δ with cos δ = X on the branch (−3π/2, π/2]; the sine's
    // sign decides whether δ has wound past −π.
    let sine = odd_quadrature_sine(beta, theta);
    let delta = if sine <= 0.0 {
        -acos_x
    } else if x >= 0.0 {
        acos_x
    } else {
        acos_x - 2.0 * PI
    };
    Ok(CountParts {
        numerator: FRAC_PI_2 + delta,
        denominator: m.w,
    })
}

/// Continuous iteration count of the odd member, φ = θ. Negative values mean
/// that even a single application of G overshoots.
pub fn f_odd(beta: f64, theta: f64) -> Result<f64> {
    f_odd_parts(beta, theta).map(|p| p.value())
}

pub fn f_grover_parts(beta: f64, theta: f64) -> Result<CountParts> {
    check_inputs(beta, theta)?;
    let s = clip_unit((theta / 2.0).sin() * beta.sin())?;
    let half = s.asin();
    if half < DEGENERATE_DENOMINATOR {
        return Err(Error::DegenerateAngle { beta, theta });
    }
    Ok(CountParts {
        numerator: FRAC_PI_2 - half,
        denominator: 2.0 * half,
    })
}

/// Continuous iteration count of `Gⁿ` at φ = θ.
pub fn f_grover(beta: f64, theta: f64) -> Result<f64> {
    f_grover_parts(beta, theta).map(|p| p.value())
}

/// Continuous count of the given member.
pub fn f_member(member: MemberKind, beta: f64, theta: f64) -> Result<f64> {
    match member {
        MemberKind::EvenA2n => f_even(beta, theta),
        MemberKind::OddA2n1 => f_odd(beta, theta),
        MemberKind::GroverGn => f_grover(beta, theta),
    }
}

/// Continuous oracle-call function: 2f for the even member, 2f + 1 for the
/// odd member, f for `Gⁿ`.
pub fn continuous_calls(member: MemberKind, beta: f64, theta: f64) -> Result<f64> {
    let f = f_member(member, beta, theta)?;
    Ok(match member {
        MemberKind::EvenA2n => 2.0 * f,
        MemberKind::OddA2n1 => 2.0 * f + 1.0,
        MemberKind::GroverGn => f,
    })
}

/// δ_e = arcsin(sin β cos(φ/2 − γ)) for the even member.
pub fn delta_e(beta: f64, phases: &PhaseConfig, sd: &SpectralData) -> f64 {
    even_offset(beta, phases.phi, sd.gamma)
}

fn even_offset(beta: f64, phi: f64, gamma: f64) -> f64 {
    (beta.sin() * (phi / 2.0 - gamma).cos())
        .clamp(-1.0, 1.0)
        .asin()
}

/// Smallest integer not below `f`, snapping near-integers and clamping at 0.
pub fn ceiling_policy(f: f64) -> u64 {
    let rounded = f.round();
    let n = if (f - rounded).abs() < SNAP_TOL {
        rounded
    } else {
        f.ceil()
    };
    n.max(0.0) as u64
}

/// Oracle calls read off the continuous call function `c` by the parity rule:
/// round `c` up, then bump by one if the parity is wrong for the member.
pub fn parity_rule(member: MemberKind, c: f64) -> u64 {
    let k = ceiling_policy(c);
    match member {
        MemberKind::EvenA2n => k + k % 2,
        MemberKind::OddA2n1 => {
            let k = k.max(1);
            k + (1 - k % 2)
        }
        MemberKind::GroverGn => k,
    }
}

pub fn oracle_calls(member: MemberKind, beta: f64, theta: f64) -> Result<CountEval> {
    let parts = match member {
        MemberKind::EvenA2n => f_even_parts(beta, theta)?,
        MemberKind::OddA2n1 => f_odd_parts(beta, theta)?,
        MemberKind::GroverGn => f_grover_parts(beta, theta)?,
    };
    let f_value = parts.value();
    let n_iterations = ceiling_policy(f_value);
    let delta = match member {
        MemberKind::EvenA2n => {
            let (_, gamma) = polar_r_gamma(theta, beta);
            Some(even_offset(beta, -theta, gamma))
        }
        _ => None,
    };
    Ok(CountEval {
        member,
        beta,
        theta,
        f_value,
        numerator: parts.numerator,
        denominator: parts.denominator,
        delta_e: delta,
        n_iterations,
        oracle_calls: member.calls_for_iterations(n_iterations),
    })
}
