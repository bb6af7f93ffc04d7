//! Singly-periodic O-regular cotangent, tangent, cosecant and secant built
//! from periodized Cauchy-kernel sums `sum_n s^n q0(zeta + n*step)`.
//!
//! Every truncated sum carries a certified tail bound. For the kernel itself
//! `|q0(u)| = |u|^-7`, and comparing the discarded terms with an integral
//! gives
//!
//! ```text
//!   tail(N) <= 2 * int_N^inf (step*x - |zeta|)^-7 dx = (step*N - |zeta|)^-6 / (3*step)
//! ```
//!
//! For the real-direction derivative `|dq0/dx0 (u)| <= 7 |u|^-8`, which gives
//! `tail(N) <= 2 (step*N - |zeta|)^-7 / step`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::regularity::{cauchy_kernel, dq0_dx0};

/// Terms closer than this to a pole are rejected.
pub const SINGULARITY_RADIUS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    pub tail_tol: f64,
    pub max_terms: usize,
}

impl TruncationPolicy {
    pub fn new(tail_tol: f64, max_terms: usize) -> Result<Self> {
        if !(tail_tol > 0.0) || !tail_tol.is_finite() {
            return Err(Error::Config(format!("tail tolerance must be positive, got {tail_tol}")));
        }
        if max_terms == 0 {
            return Err(Error::Config("max_terms must be at least 1".into()));
        }
        Ok(TruncationPolicy { tail_tol, max_terms })
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tail_tol: 1e-12,
            max_terms: 1_000_000,
        }
    }
}

/// Lattice spacing and sign pattern of a periodized sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodizedSumSpec {
    pub step: f64,
    pub alternating: bool,
}

impl PeriodizedSumSpec {
    pub fn new(step: f64, alternating: bool) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::Config(format!("lattice step must be positive, got {step}")));
        }
        Ok(PeriodizedSumSpec { step, alternating })
    }
}

/// A truncated series value with its certified remainder bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: Octonion,
    pub tail_bound: f64,
    /// Terms kept on each side of `n = 0`.
    pub terms: usize,
}

/// Which summand the periodized series uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summand {
    /// `q0`, homogeneous of degree -7.
    Kernel,
    /// `dq0/dx0`, homogeneous of degree -8.
    KernelDx0,
}

impl Summand {
    fn eval(self, u: Octonion) -> Result<Octonion> {
        match self {
            Summand::Kernel => cauchy_kernel(u),
            Summand::KernelDx0 => dq0_dx0(u),
        }
    }

    /// Certified bound on the terms with `|n| > n_terms`; `None` while the
    /// lattice has not yet passed `|zeta|`.
    pub fn tail_bound(self, zeta_norm: f64, step: f64, n_terms: usize) -> Option<f64> {
        let gap = step * n_terms as f64 - zeta_norm;
        if gap <= 0.0 {
            return None;
        }
        Some(match self {
            Summand::Kernel => gap.powi(-6) / (3.0 * step),
            Summand::KernelDx0 => 2.0 * gap.powi(-7) / step,
        })
    }

    /// Smallest `N` whose tail bound is below `tol`.
    fn required_terms(self, zeta_norm: f64, step: f64, tol: f64) -> f64 {
        let gap = match self {
            Summand::Kernel => (1.0 / (3.0 * step * tol)).powf(1.0 / 6.0),
            Summand::KernelDx0 => (2.0 / (step * tol)).powf(1.0 / 7.0),
        };
        ((zeta_norm + gap) / step).floor() + 1.0
    }
}

fn term(summand: Summand, zeta: Octonion, shift: f64) -> Result<Octonion> {
    let u = zeta + Octonion::real(shift);
    if u.norm() < SINGULARITY_RADIUS {
        return Err(Error::Singularity(format!(
            "series term at {u} lies within {SINGULARITY_RADIUS:e} of a pole"
        )));
    }
    summand.eval(u)
}

/// Sums `|n| <= n_terms` exactly as requested, without consulting a policy.
///
/// Pairs `(n, -n)` are accumulated from the outermost pair inwards so that
/// the small terms are added before the dominant ones.
pub fn periodized_sum_with_terms(
    zeta: Octonion,
    spec: PeriodizedSumSpec,
    summand: Summand,
    n_terms: usize,
) -> Result<SeriesValue> {
    let mut acc = Octonion::ZERO;
    for n in (1..=n_terms).rev() {
        let shift = spec.step * n as f64;
        let pair = term(summand, zeta, shift)? + term(summand, zeta, -shift)?;
        if spec.alternating && n % 2 == 1 {
            acc -= pair;
        } else {
            acc += pair;
        }
    }
    acc += term(summand, zeta, 0.0)?;
    let tail_bound = summand
        .tail_bound(zeta.norm(), spec.step, n_terms)
        .unwrap_or(f64::INFINITY);
    Ok(SeriesValue {
        value: acc,
        tail_bound,
        terms: n_terms,
    })
}

fn periodized(zeta: Octonion, spec: PeriodizedSumSpec, summand: Summand, pol: TruncationPolicy) -> Result<SeriesValue> {
    if !zeta.is_finite() {
        return Err(Error::Domain(format!("non-finite series argument {zeta:?}")));
    }
    let zn = zeta.norm();
    let need = summand.required_terms(zn, spec.step, pol.tail_tol);
    if need > pol.max_terms as f64 {
        return Err(Error::Policy(format!(
            "tail tolerance {:e} needs {need} terms, cap is {}",
            pol.tail_tol, pol.max_terms
        )));
    }
    let mut n = need as usize;
    // floating-point guard on the closed-form inversion
    while summand.tail_bound(zn, spec.step, n).map_or(true, |b| b >= pol.tail_tol) {
        n += 1;
        if n > pol.max_terms {
            return Err(Error::Policy(format!("more than {} terms needed", pol.max_terms)));
        }
    }
    periodized_sum_with_terms(zeta, spec, summand, n)
}

/// `sum_n s^n q0(zeta + n*step)` truncated under `pol`.
pub fn periodized_sum(zeta: Octonion, spec: PeriodizedSumSpec, pol: TruncationPolicy) -> Result<SeriesValue> {
    periodized(zeta, spec, Summand::Kernel, pol)
}

/// `sum_n s^n dq0/dx0(zeta + n*step)` truncated under `pol`.
pub fn periodized_sum_dx0(zeta: Octonion, spec: PeriodizedSumSpec, pol: TruncationPolicy) -> Result<SeriesValue> {
    periodized(zeta, spec, Summand::KernelDx0, pol)
}

const COT_SPEC: PeriodizedSumSpec = PeriodizedSumSpec {
    step: PI,
    alternating: false,
};
const CSC_SPEC: PeriodizedSumSpec = PeriodizedSumSpec {
    step: PI,
    alternating: true,
};

pub fn cot(z: Octonion, pol: TruncationPolicy) -> Result<SeriesValue> {
    periodized_sum(z, COT_SPEC, pol)
}

/// `tan(z) = -cot(z + pi/2)`.
pub fn tan(z: Octonion, pol: TruncationPolicy) -> Result<SeriesValue> {
    let c = cot(z + Octonion::real(FRAC_PI_2), pol)?;
    Ok(SeriesValue { value: -c.value, ..c })
}

pub fn csc(z: Octonion, pol: TruncationPolicy) -> Result<SeriesValue> {
    periodized_sum(z, CSC_SPEC, pol)
}

/// `sec(z) = csc(z + pi/2)`.
pub fn sec(z: Octonion, pol: TruncationPolicy) -> Result<SeriesValue> {
    csc(z + Octonion::real(FRAC_PI_2), pol)
}

/// Real-direction derivative of the cotangent series, summed term-wise.
pub fn cot_dx0(z: Octonion, pol: TruncationPolicy) -> Result<SeriesValue> {
    periodized_sum_dx0(z, COT_SPEC, pol)
}

/// `|cot(z) + cot(z + pi/2) - 128 cot(2z)|`.
pub fn duplication_residual(z: Octonion, pol: TruncationPolicy) -> Result<f64> {
    let a = cot(z, pol)?.value;
    let b = cot(z + Octonion::real(FRAC_PI_2), pol)?.value;
    let c = cot(z.scale(2.0), pol)?.value;
    Ok((a + b - c.scale(128.0)).norm())
}

/// `|tan(z) - (cot(z) - 128 cot(2z))|`.
pub fn tan_cot_relation_residual(z: Octonion, pol: TruncationPolicy) -> Result<f64> {
    let t = tan(z, pol)?.value;
    let a = cot(z, pol)?.value;
    let c = cot(z.scale(2.0), pol)?.value;
    Ok((t - (a - c.scale(128.0))).norm())
}

/// `|csc(z) - (cot(z/2)/64 - cot(z))|`.
pub fn csc_cot_identity_residual(z: Octonion, pol: TruncationPolicy) -> Result<f64> {
    let s = csc(z, pol)?.value;
    let h = cot(z.scale(0.5), pol)?.value;
    let a = cot(z, pol)?.value;
    Ok((s - (h.scale(1.0 / 64.0) - a)).norm())
}

/// `|sec(z) - csc(z + pi/2)|` with the cosecant evaluated through its
/// cotangent representation, so the two sides share no code path.
pub fn sec_definition_residual(z: Octonion, pol: TruncationPolicy) -> Result<f64> {
    let s = sec(z, pol)?.value;
    let shifted = z + Octonion::real(FRAC_PI_2);
    let h = cot(shifted.scale(0.5), pol)?.value;
    let a = cot(shifted, pol)?.value;
    Ok((s - (h.scale(1.0 / 64.0) - a)).norm())
}

/// Residuals of the two candidate forms of the combined relation
/// `csc(z) + tan(z) - tan(z/2)/64 = ?`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CombinedResiduals {
    /// Against `128 cot(2z)`.
    pub single_term: f64,
    /// Against `2 cot(z) - 128 cot(2z)`, obtained by composing the
    /// duplication, tangent and cosecant identities.
    pub composed: f64,
}

impl CombinedResiduals {
    /// Which candidates fall below `tol`: `(single_term, composed)`.
    pub fn vanishing(&self, tol: f64) -> (bool, bool) {
        (self.single_term < tol, self.composed < tol)
    }
}

pub fn combined_relation_residuals(z: Octonion, pol: TruncationPolicy) -> Result<CombinedResiduals> {
    let lhs = csc(z, pol)?.value + tan(z, pol)?.value - tan(z.scale(0.5), pol)?.value.scale(1.0 / 64.0);
    let cot2 = cot(z.scale(2.0), pol)?.value.scale(128.0);
    let cot1 = cot(z, pol)?.value.scale(2.0);
    Ok(CombinedResiduals {
        single_term: (lhs - cot2).norm(),
        composed: (lhs - (cot1 - cot2)).norm(),
    })
}
