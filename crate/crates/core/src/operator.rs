//! Exact 2×2 operators of the generalized Grover family.
//!
//! Everything lives in the two-dimensional invariant subspace spanned by the
//! marked state |τ⟩ and its in-subspace complement |τ⊥⟩. All matrices are
//! row-major in the basis order (|τ⟩, |τ⊥⟩), so `a21` is ⟨τ⊥|U|τ⟩.
//!
//! The operators are
//!
//! * `I_τ = 1 + (e^{iφ} − 1)|τ⟩⟨τ|`, the selective phase on the marked state,
//! * `I_s = −1 + (1 − e^{iθ})|s⟩⟨s|`, the selective phase on the initial state,
//! * `G = I_s I_τ`, the generalized Grover iterate,
//! * the block `I_s† I_τ† I_s I_τ`, whose n-th power is the even member
//!   `A₂ₙ`; the odd member is `A₂ₙ₊₁ = G A₂ₙ`.
//!
//! The block has unit determinant, so its eigenvalues are `e^{±iw}` and
//! `A₂ₙ` has the closed form `cos(nw) I + i sin(nw) (cos 2x σ_z + ...)`
//! computed by [`build_a_even`]. [`Unitary2::powi`] supplies the independent
//! repeated-squaring route.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, PhaseConfig};

pub type ComplexScalar = Complex64;

/// Below this rotation angle (or this close to π) the block is ±I.
pub const DEGENERATE_W: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Amplitudes on |τ⟩ and |τ⊥⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVec2 {
    pub c_tau: Complex64,
    pub c_perp: Complex64,
}

impl StateVec2 {
    pub fn new(c_tau: Complex64, c_perp: Complex64) -> Self {
        Self { c_tau, c_perp }
    }

    pub fn real(c_tau: f64, c_perp: f64) -> Self {
        Self::new(Complex64::new(c_tau, 0.0), Complex64::new(c_perp, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c_tau.norm_sqr() + self.c_perp.norm_sqr()
    }

    /// |⟨τ|ψ⟩|².
    pub fn success_probability(&self) -> f64 {
        self.c_tau.norm_sqr()
    }
}

/// A 2×2 complex matrix, row-major in the (|τ⟩, |τ⊥⟩) basis.
///
/// Builders in this module only ever return unitaries, but the type itself
/// does not enforce it; [`Unitary2::unitarity_deviation`] measures it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2 {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Unitary2 {
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn diag(d1: Complex64, d2: Complex64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.a11 * k, self.a12 * k, self.a21 * k, self.a22 * k)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.a11 + other.a11,
            self.a12 + other.a12,
            self.a21 + other.a21,
            self.a22 + other.a22,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn apply(&self, v: &StateVec2) -> StateVec2 {
        StateVec2::new(
            self.a11 * v.c_tau + self.a12 * v.c_perp,
            self.a21 * v.c_tau + self.a22 * v.c_perp,
        )
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_entry_distance(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |(U†U − I)ᵢⱼ|.
    pub fn unitarity_deviation(&self) -> f64 {
        (self.adjoint() * *self).max_entry_distance(&Self::identity())
    }

    /// `selfⁿ` by repeated squaring.
    pub fn powi(&self, mut n: u64) -> Self {
        let mut result = Self::identity();
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            n >>= 1;
        }
        result
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

/// ⟨τ⊥|U|s⟩, the amplitude left outside the marked state.
pub fn residual_amplitude(u: &Unitary2, geom: &Geometry) -> Complex64 {
    u.apply(&geom.initial_state()).c_perp
}

/// ⟨τ|U|s⟩.
pub fn success_amplitude(u: &Unitary2, geom: &Geometry) -> Complex64 {
    u.apply(&geom.initial_state()).c_tau
}

/// `diag(e^{iφ}, 1)`.
pub fn build_i_tau(phases: &PhaseConfig, _geom: &Geometry) -> Unitary2 {
    Unitary2::diag(Complex64::cis(phases.phi), ONE)
}

/// `−I + (1 − e^{iθ}) |s⟩⟨s|` with |s⟩ = (sin β, cos β).
pub fn build_i_s(phases: &PhaseConfig, geom: &Geometry) -> Unitary2 {
    let k = ONE - Complex64::cis(phases.theta);
    let (sb, cb) = (geom.sin_beta(), geom.cos_beta());
    Unitary2::new(
        k * (sb * sb) - ONE,
        k * (sb * cb),
        k * (sb * cb),
        k * (cb * cb) - ONE,
    )
}

/// `G = I_s I_τ`.
pub fn build_g(phases: &PhaseConfig, geom: &Geometry) -> Unitary2 {
    build_i_s(phases, geom) * build_i_tau(phases, geom)
}

/// `I_s† I_τ† I_s I_τ` by explicit product of the four factors.
pub fn build_block(phases: &PhaseConfig, geom: &Geometry) -> Unitary2 {
    let i_s = build_i_s(phases, geom);
    let i_tau = build_i_tau(phases, geom);
    i_s.adjoint() * i_tau.adjoint() * i_s * i_tau
}

/// Polar form `r e^{iγ} = cos(θ/2) + i sin(θ/2) cos 2β`, with r ≥ 0 and
/// γ ∈ (−π, π].
pub fn polar_r_gamma(theta: f64, beta: f64) -> (f64, f64) {
    let z = Complex64::new(
        (theta / 2.0).cos(),
        (theta / 2.0).sin() * (2.0 * beta).cos(),
    );
    (z.norm(), z.arg())
}

/// The scalar pieces shared by the block's closed form and its eigensystem.
#[derive(Debug, Clone, Copy)]
struct BlockTerms {
    w: f64,
    sin_w: f64,
    r: f64,
    gamma: f64,
    /// sin²(θ/2) sin φ sin²(2β): imaginary part of the diagonal.
    diag_im: f64,
    /// 2r sin(θ/2) sin(φ/2) sin(2β): modulus of the off-diagonal.
    off: f64,
    /// φ/2 − γ: phase of the off-diagonal.
    off_phase: f64,
}

impl BlockTerms {
    fn new(phases: &PhaseConfig, geom: &Geometry) -> Self {
        let (theta, phi, beta) = (phases.theta, phases.phi, geom.beta());
        let st = (theta / 2.0).sin();
        let s2b = (2.0 * beta).sin();
        // 1 − cos w = 2 sin²(w/2) = 2 sin²(θ/2) sin²(φ/2) sin²(2β)
        let half = (st * (phi / 2.0).sin() * s2b).abs().min(1.0);
        let w = 2.0 * half.asin();
        let (r, gamma) = polar_r_gamma(theta, beta);
        Self {
            w,
            sin_w: w.sin(),
            r,
            gamma,
            diag_im: st * st * phi.sin() * s2b * s2b,
            off: 2.0 * r * st * (phi / 2.0).sin() * s2b,
            off_phase: phi / 2.0 - gamma,
        }
    }

    fn is_degenerate(&self) -> bool {
        self.w < DEGENERATE_W || PI - self.w < DEGENERATE_W
    }
}

/// The block operator from its closed-form entries rather than a product.
pub fn block_closed_form(phases: &PhaseConfig, geom: &Geometry) -> Unitary2 {
    let t = BlockTerms::new(phases, geom);
    let cw = t.w.cos();
    let e = Complex64::cis(t.off_phase);
    Unitary2::new(
        Complex64::new(cw, t.diag_im),
        e.conj() * t.off,
        -e * t.off,
        Complex64::new(cw, -t.diag_im),
    )
}

/// Spectral quantities of the block operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    /// Rotation angle in [0, π]; eigenvalues are e^{±iw}.
    pub w: f64,
    pub r: f64,
    pub gamma: f64,
    /// Eigenvector mixing angle.
    pub x: f64,
    pub ell: f64,
    pub eig_plus: Complex64,
    pub eig_minus: Complex64,
    pub vec_plus: StateVec2,
    pub vec_minus: StateVec2,
}

pub fn spectral(phases: &PhaseConfig, geom: &Geometry) -> Result<SpectralData> {
    let t = BlockTerms::new(phases, geom);
    if t.is_degenerate() {
        return Err(Error::DegenerateSpectrum { w: t.w });
    }
    let cos_part = t.sin_w + t.diag_im;
    let ell = cos_part * cos_part + t.off * t.off;
    let x = t.off.atan2(cos_part);
    let (sx, cx) = x.sin_cos();
    let e = Complex64::cis(t.off_phase);
    Ok(SpectralData {
        w: t.w,
        r: t.r,
        gamma: t.gamma,
        x,
        ell,
        eig_plus: Complex64::cis(t.w),
        eig_minus: Complex64::cis(-t.w),
        vec_plus: StateVec2::new(Complex64::new(cx, 0.0), I * e * sx),
        vec_minus: StateVec2::new(I * e.conj() * sx, Complex64::new(cx, 0.0)),
    })
}

/// `A₂ₙ = (I_s† I_τ† I_s I_τ)ⁿ` from the spectral closed form. Falls back to
/// repeated squaring when the spectrum is degenerate.
pub fn build_a_even(n: u64, phases: &PhaseConfig, geom: &Geometry) -> Unitary2 {
    let sd = match spectral(phases, geom) {
        Ok(sd) => sd,
        Err(_) => return build_block(phases, geom).powi(n),
    };
    // n·w is reduced mod 2π in f64; exact for the n this crate plans.
    let nw = n as f64 * sd.w;
    let (snw, cnw) = nw.sin_cos();
    let (s2x, c2x) = (2.0 * sd.x).sin_cos();
    let e = Complex64::cis(phases.phi / 2.0 - sd.gamma);
    Unitary2::new(
        Complex64::new(cnw, snw * c2x),
        e.conj() * (s2x * snw),
        -e * (s2x * snw),
        Complex64::new(cnw, -snw * c2x),
    )
}

/// `A₂ₙ₊₁ = G A₂ₙ`.
pub fn build_a_odd(n: u64, phases: &PhaseConfig, geom: &Geometry) -> Unitary2 {
    build_g(phases, geom) * build_a_even(n, phases, geom)
}

/// `Gⁿ` for n ≥ 1.
pub fn build_g_power(n: u64, phases: &PhaseConfig, geom: &Geometry) -> Result<Unitary2> {
    if n == 0 {
        return Err(Error::InvalidInput("G power needs n >= 1".into()));
    }
    Ok(build_g(phases, geom).powi(n))
}
