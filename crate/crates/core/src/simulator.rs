//! Exact verification of plans, in the two-dimensional subspace and on a
//! full N-item statevector.
//!
//! Full runs apply the factors of a member right to left: the block
//! `I_s† I_τ† I_s I_τ` acts as I_τ, then I_s, then I_τ†, then I_s†. The odd
//! member finishes with one more I_τ, I_s pair.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::MemberKind;
use crate::error::{Error, Result};
use crate::geometry::{beta_from_counts, Geometry, PhaseConfig};
use crate::operator::{build_g, residual_amplitude, success_amplitude};
use crate::planner::{member_operator, Plan};

/// |β_plan − β_instance| allowed by [`run_full`].
pub const BETA_MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimResult {
    pub success_probability: f64,
    /// ⟨τ⊥|ψ⟩, with |τ⊥⟩ the uniform state over unmarked items in full runs.
    #[serde(skip)]
    pub residual_amplitude: Complex64,
    pub oracle_calls_used: u64,
}

/// Runs a member on the 2D subspace with arbitrary (possibly unmatched)
/// phases.
pub fn run_subspace_with(
    member: MemberKind,
    n_iterations: u64,
    phases: &PhaseConfig,
    geom: &Geometry,
) -> SimResult {
    let op = match (member, n_iterations) {
        (MemberKind::GroverGn, n) => build_g(phases, geom).powi(n),
        (m, n) => member_operator(m, n, phases, geom),
    };
    SimResult {
        success_probability: success_amplitude(&op, geom).norm_sqr(),
        residual_amplitude: residual_amplitude(&op, geom),
        oracle_calls_used: member.calls_for_iterations(n_iterations),
    }
}

pub fn run_subspace(plan: &Plan) -> Result<SimResult> {
    Ok(run_subspace_with(
        plan.member,
        plan.n_iterations,
        &plan.phases()?,
        &plan.geometry()?,
    ))
}

/// One elementary factor of a member's operator sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    ITau { dagger: bool },
    IS { dagger: bool },
}

impl Step {
    pub fn is_oracle_call(self) -> bool {
        matches!(self, Step::ITau { .. })
    }
}

/// The factors of `member` with `n` iterations, in application order.
pub fn operator_sequence(member: MemberKind, n: u64) -> Vec<Step> {
    let forward = [Step::ITau { dagger: false }, Step::IS { dagger: false }];
    let block = [
        Step::ITau { dagger: false },
        Step::IS { dagger: false },
        Step::ITau { dagger: true },
        Step::IS { dagger: true },
    ];
    let n = n as usize;
    match member {
        MemberKind::EvenA2n => block.repeat(n),
        MemberKind::OddA2n1 => {
            let mut seq = block.repeat(n);
            seq.extend_from_slice(&forward);
            seq
        }
        MemberKind::GroverGn => forward.repeat(n),
    }
}

/// An N-item statevector with its marked set.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    amplitudes: Vec<Complex64>,
    marked: Vec<usize>,
    is_marked: Vec<bool>,
}

impl FullState {
    /// The uniform superposition over `n_items` with the given marked indices.
    pub fn uniform(n_items: usize, marked: &[usize]) -> Result<Self> {
        if n_items == 0 {
            return Err(Error::InvalidInput("need at least one item".into()));
        }
        let set: BTreeSet<usize> = marked.iter().copied().collect();
        if set.is_empty() {
            return Err(Error::InvalidInput("marked set is empty".into()));
        }
        if set.len() != marked.len() {
            return Err(Error::InvalidInput("marked indices repeat".into()));
        }
        if let Some(&bad) = set.iter().find(|&&i| i >= n_items) {
            return Err(Error::InvalidInput(format!(
                "marked index {bad} out of range for N = {n_items}"
            )));
        }
        let mut is_marked = vec![false; n_items];
        for &i in &set {
            is_marked[i] = true;
        }
        let amp = Complex64::new(1.0 / (n_items as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: vec![amp; n_items],
            marked: set.into_iter().collect(),
            is_marked,
        })
    }

    pub fn n_items(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_marked(&self) -> usize {
        self.marked.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// β of this instance, arcsin √(M/N).
    pub fn beta(&self) -> f64 {
        beta_from_counts(self.n_items() as u64, self.n_marked() as u64)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Σ over marked items of |ψᵢ|².
    pub fn success_probability(&self) -> f64 {
        self.marked
            .iter()
            .map(|&i| self.amplitudes[i].norm_sqr())
            .sum()
    }

    /// ⟨τ⊥|ψ⟩ with |τ⊥⟩ uniform over the unmarked items (zero if none).
    pub fn residual_amplitude(&self) -> Complex64 {
        let unmarked = self.n_items() - self.n_marked();
        if unmarked == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let sum: Complex64 = self
            .amplitudes
            .iter()
            .zip(&self.is_marked)
            .filter(|(_, &m)| !m)
            .map(|(a, _)| *a)
            .sum();
        sum / (unmarked as f64).sqrt()
    }

    /// Norm of the component of ψ outside span{uniform over marked, uniform
    /// over unmarked}.
    pub fn subspace_leakage(&self) -> f64 {
        let (mut sum_m, mut sum_u) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (a, &m) in self.amplitudes.iter().zip(&self.is_marked) {
            if m {
                sum_m += a;
            } else {
                sum_u += a;
            }
        }
        let n_m = self.n_marked() as f64;
        let n_u = (self.n_items() - self.n_marked()) as f64;
        let mean_m = sum_m / n_m;
        let mean_u = if n_u > 0.0 { sum_u / n_u } else { sum_u };
        self.amplitudes
            .iter()
            .zip(&self.is_marked)
            .map(|(a, &m)| (a - if m { mean_m } else { mean_u }).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Multiplies marked amplitudes by e^{iφ} (e^{−iφ} for the adjoint).
    pub fn apply_i_tau(&mut self, phi: f64, dagger: bool) {
        let phase = Complex64::cis(if dagger { -phi } else { phi });
        for &i in &self.marked {
            self.amplitudes[i] *= phase;
        }
    }

    /// ψ ← −ψ + (1 − e^{±iθ}) ⟨s|ψ⟩ s, in O(N).
    pub fn apply_i_s(&mut self, theta: f64, dagger: bool) {
        let n = self.n_items() as f64;
        let k = Complex64::new(1.0, 0.0) - Complex64::cis(if dagger { -theta } else { theta });
        let sum: Complex64 = self.amplitudes.iter().sum();
        // ⟨s|ψ⟩ sᵢ = Σψ / N for the uniform s
        let shift = k * sum / n;
        for a in &mut self.amplitudes {
            *a = shift - *a;
        }
    }

    pub fn apply(&mut self, step: Step, phases: &PhaseConfig) {
        match step {
            Step::ITau { dagger } => self.apply_i_tau(phases.phi, dagger),
            Step::IS { dagger } => self.apply_i_s(phases.theta, dagger),
        }
    }
}

/// Applies `steps` to `state`, calling `observe` after every factor.
pub fn run_steps<F>(state: &mut FullState, steps: &[Step], phases: &PhaseConfig, mut observe: F)
where
    F: FnMut(&FullState, Step),
{
    for &step in steps {
        state.apply(step, phases);
        observe(state, step);
    }
}

fn instance_for(plan: &Plan, n_items: usize, marked: &[usize]) -> Result<FullState> {
    let state = FullState::uniform(n_items, marked)?;
    let beta = state.beta();
    if (beta - plan.beta).abs() > BETA_MATCH_TOL {
        return Err(Error::BetaMismatch {
            plan: plan.beta,
            instance: beta,
        });
    }
    Ok(state)
}

/// Runs `plan` on an explicit N-item instance. The instance's β must match
/// the plan's.
pub fn run_full(plan: &Plan, n_items: usize, marked: &[usize]) -> Result<SimResult> {
    let mut state = instance_for(plan, n_items, marked)?;
    let phases = plan.phases()?;
    let steps = operator_sequence(plan.member, plan.n_iterations);
    run_steps(&mut state, &steps, &phases, |_, _| {});
    Ok(SimResult {
        success_probability: state.success_probability(),
        residual_amplitude: state.residual_amplitude(),
        oracle_calls_used: steps.iter().filter(|s| s.is_oracle_call()).count() as u64,
    })
}

/// Success probability before the run and after each oracle call, i.e. after
/// each I_τ (or I_τ†) and the I_s factor that follows it.
pub fn success_trace(plan: &Plan, n_items: usize, marked: &[usize]) -> Result<Vec<f64>> {
    let mut state = instance_for(plan, n_items, marked)?;
    let phases = plan.phases()?;
    let steps = operator_sequence(plan.member, plan.n_iterations);
    let mut trace = vec![state.success_probability()];
    run_steps(&mut state, &steps, &phases, |s, step| {
        if let Step::IS { .. } = step {
            trace.push(s.success_probability());
        }
    });
    Ok(trace)
}
