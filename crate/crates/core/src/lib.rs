//! Planning and verification for the phase-matched family of sure-success
//! quantum search operators: the even member A₂ₙ = (I_s†I_τ†I_sI_τ)ⁿ, the odd
//! member A₂ₙ₊₁ = G·A₂ₙ and the generalized Grover power Gⁿ.
//!
//! All operators act on the invariant plane spanned by the marked state |τ⟩
//! and its complement |τ⊥⟩. [`closed_form`] gives the continuous iteration
//! counts, [`planner`] picks the phase that makes the count integral, and
//! [`simulator`] replays a plan on the plane or on a full statevector.

pub mod closed_form;
pub mod error;
pub mod geometry;
pub mod operator;
pub mod planner;
pub mod roots;
pub mod simulator;
pub mod sweep;

pub use closed_form::{
    ceiling_policy, continuous_calls, f_even, f_grover, f_member, f_odd, oracle_calls, parity_rule,
    CountEval, MemberKind,
};
pub use error::{Error, Result};
pub use geometry::{beta_from_counts, Geometry, PhaseConfig};
pub use operator::{spectral, SpectralData, StateVec2, Unitary2};
pub use planner::{continuous_iteration_oracle, make_plan, minimal_calls, solve_theta_op, Plan};
pub use simulator::{run_full, run_subspace, FullState, SimResult};
pub use sweep::{sweep, theta_grid, SweepRow};
