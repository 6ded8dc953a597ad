//! Choosing θ_op and assembling sure-success plans.
//!
//! For a given member and β the minimal call count is the count at θ = π,
//! where every call function is smallest. Away from π the continuous count
//! rises, so the phase nearest π at which it reaches that integer exactly
//! gives a plan whose final residual amplitude is zero.
//!
//! [`continuous_iteration_oracle`] recomputes the continuous counts from the
//! product-built operators alone, as a check on the closed forms.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::{ceiling_policy, f_member, oracle_calls, MemberKind};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, PhaseConfig};
use crate::operator::{self, build_block, build_g, Unitary2, DEGENERATE_W};
use crate::roots::{scan_for_sign_change, Bisection};

/// Smallest θ the bracket search will try.
pub const THETA_FLOOR: f64 = 0.01;
const FIRST_OFFSET: f64 = 1e-3;
/// Offset below π standing in for θ = π where the count is 0/0 there
/// (β = π/4); the one-sided limits are ±1/2, far from any integer.
const LIMIT_OFFSET: f64 = 1e-6;
const AT_PI_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-10;
/// Scan resolution of the oracle, in sub-steps per half period.
const ORACLE_STEPS: usize = 64;

/// A fully specified run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plan {
    pub member: MemberKind,
    pub beta: f64,
    pub theta: f64,
    pub phi: f64,
    pub n_iterations: u64,
    pub oracle_calls: u64,
    pub theta_mirror: f64,
    pub predicted_success: f64,
}

impl Plan {
    /// A plan at an arbitrary θ with matched φ, counting iterations by the
    /// ceiling rule. `predicted_success` is the exact two-dimensional
    /// success probability, which is 1 only at a θ_op.
    pub fn at_theta(member: MemberKind, beta: f64, theta: f64) -> Result<Self> {
        let geom = Geometry::from_beta(beta)?;
        let phases = PhaseConfig::matched(member, theta)?;
        let eval = oracle_calls(member, beta, theta)?;
        let op = member_operator(member, eval.n_iterations, &phases, &geom);
        Ok(Self {
            member,
            beta,
            theta,
            phi: phases.phi,
            n_iterations: eval.n_iterations,
            oracle_calls: eval.oracle_calls,
            theta_mirror: 2.0 * PI - theta,
            predicted_success: operator::success_amplitude(&op, &geom).norm_sqr(),
        })
    }

    pub fn phases(&self) -> Result<PhaseConfig> {
        PhaseConfig::new(self.phi, self.theta)
    }

    pub fn geometry(&self) -> Result<Geometry> {
        Geometry::from_beta(self.beta)
    }

    /// The same plan at the mirrored phase 2π − θ.
    pub fn mirrored(&self) -> Self {
        Self {
            theta: self.theta_mirror,
            phi: self.member.matched_phi(self.theta_mirror),
            theta_mirror: self.theta,
            ..*self
        }
    }
}

/// The operator a member applies for `n` iterations.
pub fn member_operator(
    member: MemberKind,
    n: u64,
    phases: &PhaseConfig,
    geom: &Geometry,
) -> Unitary2 {
    match member {
        MemberKind::EvenA2n => operator::build_a_even(n, phases, geom),
        MemberKind::OddA2n1 => operator::build_a_odd(n, phases, geom),
        MemberKind::GroverGn => build_g(phases, geom).powi(n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveReport {
    pub target_calls: u64,
    /// Continuous iteration count at the returned θ.
    pub achieved_f: f64,
    /// |achieved_f − required iterations|.
    pub residual: f64,
    pub bisection_iterations: usize,
}

fn check_plan_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta <= 0.0 || beta >= FRAC_PI_2 {
        return Err(Error::InvalidInput(format!(
            "beta must lie in (0, pi/2) for planning, got {beta}"
        )));
    }
    Ok(())
}

/// The phase the minimal count is read at: π, or just below it when the
/// count is undefined at π itself.
fn reference_theta(member: MemberKind, beta: f64) -> Result<f64> {
    match f_member(member, beta, PI) {
        Ok(_) => Ok(PI),
        Err(Error::DegenerateAngle { .. }) => Ok(PI - LIMIT_OFFSET),
        Err(e) => Err(e),
    }
}

/// Oracle calls of the member at θ = π, the least any phase can achieve.
/// At β = π/4 the even and odd counts are read as the limit θ → π.
pub fn minimal_calls(member: MemberKind, beta: f64) -> Result<u64> {
    check_plan_beta(beta)?;
    let theta = reference_theta(member, beta)?;
    Ok(oracle_calls(member, beta, theta)?.oracle_calls)
}

/// Solves for θ_op ∈ (0, π] and reports how the solve went.
pub fn solve_theta_op_report(member: MemberKind, beta: f64) -> Result<(Plan, SolveReport)> {
    let target_calls = minimal_calls(member, beta)?;
    let required = member
        .iterations_for_calls(target_calls)
        .expect("count rule yields member parity") as f64;
    let excess = |theta: f64| -> Result<f64> { Ok(f_member(member, beta, theta)? - required) };

    let reference = reference_theta(member, beta)?;
    let at_pi = excess(reference)?;
    let (theta, bisection_iterations) = if reference == PI && at_pi.abs() < AT_PI_TOL {
        (PI, 0)
    } else {
        let (lo, hi) = grow_bracket(&excess, reference)?;
        let root = Bisection::with_tolerance(0.0).solve(&excess, lo, hi)?;
        (root.x, root.iterations)
    };

    let achieved_f = f_member(member, beta, theta)?;
    let residual = (achieved_f - required).abs();
    if residual >= RESIDUAL_TOL {
        return Err(Error::ConvergenceFailure(format!(
            "theta_op = {theta} leaves count residual {residual:e}"
        )));
    }
    let plan = Plan {
        predicted_success: 1.0,
        ..Plan::at_theta(member, beta, theta)?
    };
    if plan.oracle_calls != target_calls {
        return Err(Error::ConvergenceFailure(format!(
            "count at theta_op gives {} calls, expected {target_calls}",
            plan.oracle_calls
        )));
    }
    Ok((
        plan,
        SolveReport {
            target_calls,
            achieved_f,
            residual,
            bisection_iterations,
        },
    ))
}

/// Grows the offset below π until the count reaches the target.
fn grow_bracket(excess: &impl Fn(f64) -> Result<f64>, start: f64) -> Result<(f64, f64)> {
    let mut offset = FIRST_OFFSET;
    let mut upper = start;
    loop {
        let lower = (PI - offset).max(THETA_FLOOR);
        if excess(lower)? >= 0.0 {
            return Ok((lower, upper));
        }
        if lower <= THETA_FLOOR {
            return Err(Error::ConvergenceFailure(format!(
                "count never reaches the target on [{THETA_FLOOR}, pi]"
            )));
        }
        upper = lower;
        offset *= 2.0;
    }
}

/// The phase nearest π (from below) at which the member reaches its minimal
/// call count exactly; the mirror 2π − θ_op is carried in the plan.
pub fn solve_theta_op(member: MemberKind, beta: f64) -> Result<Plan> {
    solve_theta_op_report(member, beta).map(|(plan, _)| plan)
}

/// A sure-success plan for the member at β.
pub fn make_plan(member: MemberKind, beta: f64) -> Result<Plan> {
    let plan = solve_theta_op(member, beta)?;
    let f = f_member(member, beta, plan.theta)?;
    debug_assert!(plan.phases()?.is_matched(member));
    if member.calls_for_iterations(ceiling_policy(f)) != plan.oracle_calls {
        return Err(Error::ConvergenceFailure(format!(
            "iteration count at theta = {} does not reproduce {} calls",
            plan.theta, plan.oracle_calls
        )));
    }
    Ok(plan)
}

/// Rotation angle `w ∈ [0, π]` and generator `(U − cos w I)/sin w` of an
/// SU(2) matrix, so that `Uᵗ = cos(tw) I + sin(tw) K`.
fn su2_generator(u: &Unitary2) -> Result<(f64, Unitary2)> {
    let sin_w = (u.a11.im.powi(2) + u.a12.norm_sqr()).sqrt();
    let w = sin_w.atan2(u.a11.re);
    if w < DEGENERATE_W || PI - w < DEGENERATE_W {
        return Err(Error::DegenerateSpectrum { w });
    }
    let shifted = u.sub(&Unitary2::identity().scale(Complex64::new(w.cos(), 0.0)));
    Ok((w, shifted.scale(Complex64::new(1.0 / w.sin(), 0.0))))
}

/// The continuous iteration count recovered from the operators themselves.
///
/// The member's iteration is raised to a real power `t` through its own
/// rotation angle (global phase removed: the block is already in SU(2), and
/// `G` is rescaled by `−e^{−iθ}`). Under matching, ⟨τ⊥|·|s⟩ collapses onto a
/// single real quadrature `g(t)`, and the count is the first zero of `g`
/// reached from `t = 0` walking in the direction of the sign of `g(0)`.
/// Even and `Gⁿ` start at `g(0) = cos β > 0`; an odd member whose single `G`
/// already overshoots walks to negative `t`.
pub fn continuous_iteration_oracle(member: MemberKind, beta: f64, theta: f64) -> Result<f64> {
    let geom = Geometry::from_beta(beta)?;
    let phases = PhaseConfig::matched(member, theta)?;
    let normalized_g = || build_g(&phases, &geom).scale(-Complex64::cis(-theta));
    let (iterate, prefix) = match member {
        MemberKind::EvenA2n => (build_block(&phases, &geom), Unitary2::identity()),
        MemberKind::OddA2n1 => (build_block(&phases, &geom), normalized_g()),
        MemberKind::GroverGn => (normalized_g(), Unitary2::identity()),
    };
    let (w, generator) = su2_generator(&iterate)?;
    let s = geom.initial_state();
    let g0 = prefix.apply(&s).c_perp.re;
    let g1 = (prefix * generator).apply(&s).c_perp.re;
    let g = |t: f64| -> Result<f64> {
        let (st, ct) = (t * w).sin_cos();
        Ok(g0 * ct + g1 * st)
    };
    if g0 == 0.0 {
        return Ok(0.0);
    }
    let half_period = PI / w;
    let step = g0.signum() * half_period / ORACLE_STEPS as f64;
    let (a, b) = scan_for_sign_change(g, 0.0, step, ORACLE_STEPS + 2)?.ok_or_else(|| {
        Error::ConvergenceFailure(format!(
            "no zero of the residual quadrature within one half period ({half_period})"
        ))
    })?;
    Ok(Bisection::with_tolerance(0.0).solve(g, a, b)?.x)
}
