//! Reproducing kernels of left O-regular functions on the unit ball, on
//! strips `{0 < Re z < d}` and on the right half-space.
//!
//! Strip and half-space kernels are functions of `u = z + conj(w)`:
//!
//! ```text
//!   S_strip(z, w) = sum_n (-1)^n q0(u + 2dn)        S_half(z, w) = q0(u)
//!   B_strip(z, w) = -2 sum_n dq0/dx0(u + 2dn)       B_half(z, w) = -2 dq0/dx0(u)
//! ```
//!
//! so that `q0(u + 2dn)` has numerator `conj(z) + w + 2dn` and every kernel is
//! left O-regular in `z`. The series forms are authoritative; the rescaled
//! trigonometric forms are checked against them.

use std::f64::consts::PI;

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::regularity::{apply_d_conj_scalar, cauchy_kernel, dq0_dx0, partial, FiniteDiffConfig, FunctionHandle};
use crate::trig_series::{self, PeriodizedSumSpec, SeriesValue, TruncationPolicy};

/// Distance from the strip boundary (in `Re u`) below which strip kernels
/// refuse to evaluate.
pub const BOUNDARY_GUARD: f64 = 1e-9;

/// Denominators `|1 - conj(z) w|` below this are treated as singular.
pub const BALL_SINGULARITY: f64 = 1e-12;

/// The strip `{z : 0 < Re z < d}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripDomain {
    d: f64,
}

impl StripDomain {
    pub fn new(d: f64) -> Result<Self> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Config(format!("strip width must be positive, got {d}")));
        }
        Ok(StripDomain { d })
    }

    pub fn width(&self) -> f64 {
        self.d
    }

    /// Open-strip membership.
    pub fn contains(&self, z: Octonion) -> bool {
        z.re() > 0.0 && z.re() < self.d
    }

    fn require_interior(&self, z: Octonion, what: &str) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{what} = {z} is not inside the strip 0 < Re < {}",
                self.d
            )))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMethod {
    Series,
    ClosedForm,
}

/// A kernel value with the remainder bound of any truncated series used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelEval {
    pub value: Octonion,
    pub tail_bound: f64,
    pub method: EvalMethod,
}

/// Rescaling used in a trigonometric closed form of the strip Bergman kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CotScaling {
    /// `(pi/2d)^7 cot((pi/2d) u)`, which equals the series by homogeneity.
    HalfPeriod,
    /// `(pi/2d)^7 cot((pi/d) u)`.
    FullPeriod,
}

/// How `d/dx0` of the strip Szegő kernel is obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DerivativePath {
    /// Term-wise closed-form derivative of the alternating series.
    TermWise,
    /// Central difference of the strip Szegő kernel in `Re z`.
    FiniteDifference(FiniteDiffConfig),
}

fn ball_denominator(z: Octonion, w: Octonion) -> Result<Octonion> {
    let a = Octonion::ONE - z.conj() * w;
    if a.norm() <= BALL_SINGULARITY {
        return Err(Error::Singularity(format!(
            "|1 - conj(z) w| = {:e} at z = {z}, w = {w}",
            a.norm()
        )));
    }
    Ok(a)
}

/// Szegő kernel of the unit ball, `(1 - conj(z) w) / |1 - conj(z) w|^8`.
pub fn szego_unit_ball(z: Octonion, w: Octonion) -> Result<Octonion> {
    let a = ball_denominator(z, w)?;
    let n2 = a.norm_sqr();
    Ok(a.scale(1.0 / (n2 * n2 * n2 * n2)))
}

/// The variant with denominator `|1 - conj(w)|^8`. It does not reproduce
/// constants and is kept only for the reproduction comparison.
pub fn szego_unit_ball_alt_denominator(z: Octonion, w: Octonion) -> Result<Octonion> {
    let a = Octonion::ONE - z.conj() * w;
    let b = (Octonion::ONE - w.conj()).norm_sqr();
    if b < BALL_SINGULARITY * BALL_SINGULARITY {
        return Err(Error::Singularity(format!("|1 - conj(w)| vanishes at w = {w}")));
    }
    Ok(a.scale(1.0 / (b * b * b * b)))
}

/// Bergman kernel of the unit ball,
/// `[6(1 - |w|^2 |z|^2) + 2(1 - conj(z) w)] (1 - conj(z) w) / |1 - conj(z) w|^10`.
pub fn bergman_unit_ball(z: Octonion, w: Octonion) -> Result<Octonion> {
    let a = ball_denominator(z, w)?;
    let bracket = Octonion::real(6.0 * (1.0 - w.norm_sqr() * z.norm_sqr())) + a.scale(2.0);
    let n2 = a.norm_sqr();
    Ok((bracket * a).scale(1.0 / (n2 * n2 * n2 * n2 * n2)))
}

/// `|conj(B(z,w)) conj(z) - Dbar_w[(1 - |w|^2 |z|^2) / |1 - w conj(z)|^8]|`
/// with the conjugated Cauchy–Riemann operator taken by central differences.
pub fn bergman_unit_ball_potential_residual(z: Octonion, w: Octonion, cfg: FiniteDiffConfig) -> Result<f64> {
    let lhs = bergman_unit_ball(z, w)?.conj() * z.conj();
    let zn2 = z.norm_sqr();
    let zc = z.conj();
    let potential = |x: Octonion| -> Result<f64> {
        let a = Octonion::ONE - x * zc;
        let n2 = a.norm_sqr();
        if n2.sqrt() <= BALL_SINGULARITY {
            return Err(Error::Singularity(format!("potential singular at w = {x}")));
        }
        Ok((1.0 - x.norm_sqr() * zn2) / (n2 * n2 * n2 * n2))
    };
    let rhs = apply_d_conj_scalar(potential, w, cfg)?;
    Ok((lhs - rhs).norm())
}

fn strip_argument(z: Octonion, w: Octonion) -> Octonion {
    z + w.conj()
}

fn guard_strip_argument(u: Octonion, d: f64) -> Result<()> {
    let r = u.re();
    if r < BOUNDARY_GUARD || r > 2.0 * d - BOUNDARY_GUARD {
        return Err(Error::Singularity(format!(
            "Re(z + conj(w)) = {r} is within {BOUNDARY_GUARD:e} of the strip boundary"
        )));
    }
    Ok(())
}

/// `sum_n (-1)^n q0(u + 2dn)` for an arbitrary argument `u = z + conj(w)`.
///
/// Only pole proximity is checked, so this also serves boundary points and
/// exterior evaluation points in quadrature.
pub fn szego_strip_series_at(u: Octonion, d: f64, pol: TruncationPolicy) -> Result<SeriesValue> {
    trig_series::periodized_sum(u, PeriodizedSumSpec::new(2.0 * d, true)?, pol)
}

/// `-2 sum_n dq0/dx0(u + 2dn)` for an arbitrary argument `u = z + conj(w)`.
pub fn bergman_strip_series_at(u: Octonion, d: f64, pol: TruncationPolicy) -> Result<SeriesValue> {
    let s = trig_series::periodized_sum_dx0(u, PeriodizedSumSpec::new(2.0 * d, false)?, pol)?;
    Ok(SeriesValue {
        value: s.value.scale(-2.0),
        tail_bound: 2.0 * s.tail_bound,
        terms: s.terms,
    })
}

/// Szegő kernel of the strip.
///
/// `Series` sums the alternating lattice series directly; `ClosedForm`
/// evaluates `(pi/2d)^7 csc((pi/2d)(z + conj(w)))`.
pub fn szego_strip(
    z: Octonion,
    w: Octonion,
    strip: StripDomain,
    pol: TruncationPolicy,
    method: EvalMethod,
) -> Result<KernelEval> {
    strip.require_interior(z, "z")?;
    strip.require_interior(w, "w")?;
    let d = strip.width();
    let u = strip_argument(z, w);
    guard_strip_argument(u, d)?;
    match method {
        EvalMethod::Series => {
            let s = szego_strip_series_at(u, d, pol)?;
            Ok(KernelEval {
                value: s.value,
                tail_bound: s.tail_bound,
                method,
            })
        }
        EvalMethod::ClosedForm => {
            let c = PI / (2.0 * d);
            let pre = c.powi(7);
            let s = trig_series::csc(u.scale(c), pol)?;
            Ok(KernelEval {
                value: s.value.scale(pre),
                tail_bound: pre * s.tail_bound,
                method,
            })
        }
    }
}

/// Szegő kernel of the right half-space, `q0(z + conj(w))`.
pub fn szego_half_space(z: Octonion, w: Octonion) -> Result<Octonion> {
    require_half_space(z, "z")?;
    require_half_space(w, "w")?;
    cauchy_kernel(strip_argument(z, w))
}

/// Bergman kernel of the strip by the term-wise differentiated series.
pub fn bergman_strip(z: Octonion, w: Octonion, strip: StripDomain, pol: TruncationPolicy) -> Result<KernelEval> {
    strip.require_interior(z, "z")?;
    strip.require_interior(w, "w")?;
    let u = strip_argument(z, w);
    guard_strip_argument(u, strip.width())?;
    let s = bergman_strip_series_at(u, strip.width(), pol)?;
    Ok(KernelEval {
        value: s.value,
        tail_bound: s.tail_bound,
        method: EvalMethod::Series,
    })
}

/// `-2 d/dx0 [(pi/2d)^7 cot(c (z + conj(w)))]` with `c` chosen by `scaling`.
///
/// Only [`CotScaling::HalfPeriod`] agrees with [`bergman_strip`].
pub fn bergman_strip_closed_form(
    z: Octonion,
    w: Octonion,
    strip: StripDomain,
    pol: TruncationPolicy,
    scaling: CotScaling,
) -> Result<KernelEval> {
    strip.require_interior(z, "z")?;
    strip.require_interior(w, "w")?;
    let d = strip.width();
    let u = strip_argument(z, w);
    guard_strip_argument(u, d)?;
    let c = match scaling {
        CotScaling::HalfPeriod => PI / (2.0 * d),
        CotScaling::FullPeriod => PI / d,
    };
    let pre = -2.0 * (PI / (2.0 * d)).powi(7) * c;
    let s = trig_series::cot_dx0(u.scale(c), pol)?;
    Ok(KernelEval {
        value: s.value.scale(pre),
        tail_bound: pre.abs() * s.tail_bound,
        method: EvalMethod::ClosedForm,
    })
}

/// Bergman kernel of the right half-space, `-2 dq0/dx0(z + conj(w))`.
pub fn bergman_half_space(z: Octonion, w: Octonion) -> Result<Octonion> {
    require_half_space(z, "z")?;
    require_half_space(w, "w")?;
    Ok(dq0_dx0(strip_argument(z, w))?.scale(-2.0))
}

fn require_half_space(z: Octonion, what: &str) -> Result<()> {
    if z.re() > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} = {z} is not in the right half-space")))
    }
}

/// `|B(z/2, w/2) - B((z+d)/2, (w+d)/2) + 512 d/dx0 S(z, w)|` for the strip
/// Bergman kernel `B` and Szegő kernel `S`.
pub fn strip_relation_residual(
    z: Octonion,
    w: Octonion,
    strip: StripDomain,
    pol: TruncationPolicy,
    path: DerivativePath,
) -> Result<f64> {
    let d = strip.width();
    strip.require_interior(z, "z")?;
    strip.require_interior(w, "w")?;
    let half = |x: Octonion| x.scale(0.5);
    let shifted = |x: Octonion| (x + Octonion::real(d)).scale(0.5);
    strip.require_interior(half(z), "z/2")?;
    strip.require_interior(half(w), "w/2")?;
    strip.require_interior(shifted(z), "(z+d)/2")?;
    strip.require_interior(shifted(w), "(w+d)/2")?;

    let lhs = bergman_strip(half(z), half(w), strip, pol)?.value
        - bergman_strip(shifted(z), shifted(w), strip, pol)?.value;
    let ds_dx0 = match path {
        DerivativePath::TermWise => {
            let u = strip_argument(z, w);
            guard_strip_argument(u, d)?;
            trig_series::periodized_sum_dx0(u, PeriodizedSumSpec::new(2.0 * d, true)?, pol)?.value
        }
        DerivativePath::FiniteDifference(cfg) => {
            let szego = FunctionHandle::new(move |x| Ok(szego_strip(x, w, strip, pol, EvalMethod::Series)?.value));
            partial(&szego, z, 0, cfg)?
        }
    };
    Ok((lhs + ds_dx0.scale(512.0)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::apply_d_left;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn e(i: usize) -> Octonion {
        Octonion::basis(i)
    }

    fn r(x: f64) -> Octonion {
        Octonion::real(x)
    }

    fn random_in_strip(rng: &mut ChaCha8Rng, d: f64, im: f64) -> Octonion {
        let mut c = [0.0; 8];
        c[0] = rng.gen_range(0.2 * d..0.8 * d);
        for x in c.iter_mut().skip(1) {
            *x = rng.gen_range(-im..im);
        }
        Octonion::new(c)
    }

    #[test]
    fn unit_ball_values() {
        let w = Octonion::new([0.1, 0.2, -0.3, 0.0, 0.1, 0.0, 0.2, -0.1]);
        assert_eq!(szego_unit_ball(Octonion::ZERO, w).unwrap(), Octonion::ONE);
        assert_eq!(szego_unit_ball(w, Octonion::ZERO).unwrap(), Octonion::ONE);
        let s = szego_unit_ball(r(0.5), r(0.5)).unwrap();
        assert!((s.re() - 0.75_f64.powi(-7)).abs() < 1e-12 * s.re());
        assert_eq!(bergman_unit_ball(Octonion::ZERO, w).unwrap(), r(8.0));
        assert_eq!(bergman_unit_ball(w, Octonion::ZERO).unwrap(), r(8.0));
        let b = bergman_unit_ball(r(0.5), r(0.5)).unwrap();
        assert!((b.re() - 7.125 * 0.75_f64.powi(-9)).abs() < 1e-12 * b.re());
        assert!(matches!(szego_unit_ball(r(1.0), r(1.0)), Err(Error::Singularity(_))));
    }

    #[test]
    fn potential_representation_of_ball_bergman() {
        let cfg = FiniteDiffConfig::default();
        assert!(bergman_unit_ball_potential_residual(r(0.3), r(0.2), cfg).unwrap() < 1e-7);
        assert!(bergman_unit_ball_potential_residual(Octonion::ZERO, r(0.2), cfg).unwrap() < 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let mut pick = || {
                let mut c = [0.0; 8];
                for x in &mut c {
                    *x = rng.gen_range(-1.0..1.0);
                }
                let o = Octonion::new(c);
                o.scale(0.6 * rng.gen_range(0.0..1.0_f64) / o.norm())
            };
            let (z, w) = (pick(), pick());
            assert!(bergman_unit_ball_potential_residual(z, w, cfg).unwrap() < 1e-6);
        }
    }

    #[test]
    fn half_space_values() {
        assert_eq!(szego_half_space(r(1.0), r(1.0)).unwrap(), r(1.0 / 128.0));
        assert_eq!(bergman_half_space(r(1.0), r(1.0)).unwrap(), r(7.0 / 128.0));
        // numerator conj(z) + w = 2 + e1, |z + conj(w)|^8 = 5^4
        let s = szego_half_space(r(1.0), r(1.0) + e(1)).unwrap();
        assert!((s - (r(2.0) + e(1)).scale(1.0 / 625.0)).norm() < 1e-16);
        assert!(matches!(szego_half_space(r(-1.0), r(1.0)), Err(Error::Domain(_))));
        assert!(matches!(bergman_half_space(r(1.0), r(0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn half_space_hermitian_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let z = random_in_strip(&mut rng, 4.0, 1.0);
            let w = random_in_strip(&mut rng, 4.0, 1.0);
            let a = szego_half_space(z, w).unwrap().conj();
            let b = szego_half_space(w, z).unwrap();
            assert!((a - b).norm() <= 1e-13 * b.norm());
        }
    }

    #[test]
    fn half_space_bergman_is_minus_two_dx0_szego() {
        let cfg = FiniteDiffConfig::default();
        for (z, w) in [(r(1.0), r(1.0) + e(1)), (r(0.7) + e(3).scale(0.2), r(1.3) - e(6).scale(0.4))] {
            let szego = FunctionHandle::new(move |x| szego_half_space(x, w));
            let fd = partial(&szego, z, 0, cfg).unwrap().scale(-2.0);
            let exact = bergman_half_space(z, w).unwrap();
            assert!((fd - exact).norm() < 1e-6 * exact.norm().max(1.0));
        }
    }

    #[test]
    fn strip_szego_midpoint_value() {
        // z = w = 1/2, d = 1: u = 1, terms (-1)^n (1 + 2n)^-7 = 2 beta(7)
        let oracle: f64 = (-10_000..=10_000_i64)
            .map(|n| if n.rem_euclid(2) == 1 { -1.0 } else { 1.0 } * (1.0 + 2.0 * n as f64).powi(-7))
            .sum();
        let strip = StripDomain::new(1.0).unwrap();
        let s = szego_strip(r(0.5), r(0.5), strip, pol(), EvalMethod::Series).unwrap();
        assert!((s.value.re() - oracle).abs() < 1e-12);
        // 2 beta(7), beta the Dirichlet beta function
        assert!((oracle - 1.999_109_015_781).abs() < 1e-11);
        let c = szego_strip(r(0.5), r(0.5), strip, pol(), EvalMethod::ClosedForm).unwrap();
        assert!((c.value - s.value).norm() <= c.tail_bound + s.tail_bound + 1e-12);
    }

    #[test]
    fn strip_szego_methods_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for d in [0.5, 1.0, 3.0] {
            let strip = StripDomain::new(d).unwrap();
            for _ in 0..30 {
                let z = random_in_strip(&mut rng, d, 1.0);
                let w = random_in_strip(&mut rng, d, 1.0);
                let s = szego_strip(z, w, strip, pol(), EvalMethod::Series).unwrap();
                let c = szego_strip(z, w, strip, pol(), EvalMethod::ClosedForm).unwrap();
                assert!((s.value - c.value).norm() <= s.tail_bound + c.tail_bound + 1e-12);
            }
        }
    }

    #[test]
    fn strip_domain_errors() {
        let strip = StripDomain::new(1.0).unwrap();
        assert!(StripDomain::new(0.0).is_err());
        assert!(matches!(
            szego_strip(r(1.5), r(0.5), strip, pol(), EvalMethod::Series),
            Err(Error::Domain(_))
        ));
        assert!(matches!(bergman_strip(r(0.5), r(0.0), strip, pol()), Err(Error::Domain(_))));
        // interior by a hair on both sides: Re(u) within the guard
        let tiny = r(1e-10);
        assert!(matches!(
            szego_strip(tiny, tiny, strip, pol(), EvalMethod::Series),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn strip_bergman_midpoint_value() {
        // -2 d/dx (x + 2n)^-7 at x = 1 gives 14 (1 + 2n)^-8
        let oracle: f64 = (-10_000..=10_000_i64).map(|n| 14.0 * (1.0 + 2.0 * n as f64).powi(-8)).sum();
        let strip = StripDomain::new(1.0).unwrap();
        let b = bergman_strip(r(0.5), r(0.5), strip, pol()).unwrap();
        assert!((b.value.re() - oracle).abs() < 1e-11);
        assert!(b.value.im().norm() < 1e-15);
    }

    #[test]
    fn strip_bergman_against_fd_of_plain_series() {
        let cfg = FiniteDiffConfig::default();
        let strip = StripDomain::new(2.0).unwrap();
        let w = Octonion::new([0.9, 0.1, 0.0, -0.3, 0.0, 0.2, 0.0, 0.0]);
        let z = Octonion::new([1.1, 0.0, 0.4, 0.0, -0.2, 0.0, 0.1, 0.3]);
        let plain = FunctionHandle::new(move |x: Octonion| {
            let spec = PeriodizedSumSpec::new(4.0, false)?;
            Ok(trig_series::periodized_sum(x + w.conj(), spec, pol())?.value)
        });
        let fd = partial(&plain, z, 0, cfg).unwrap().scale(-2.0);
        let b = bergman_strip(z, w, strip, pol()).unwrap().value;
        assert!((fd - b).norm() < 1e-6);
    }

    #[test]
    fn strip_bergman_closed_forms() {
        let strip = StripDomain::new(1.5).unwrap();
        let z = Octonion::new([0.6, 0.2, 0.0, 0.1, 0.0, -0.3, 0.0, 0.0]);
        let w = Octonion::new([0.8, 0.0, -0.1, 0.0, 0.2, 0.0, 0.0, 0.4]);
        let s = bergman_strip(z, w, strip, pol()).unwrap();
        let half = bergman_strip_closed_form(z, w, strip, pol(), CotScaling::HalfPeriod).unwrap();
        let full = bergman_strip_closed_form(z, w, strip, pol(), CotScaling::FullPeriod).unwrap();
        assert!((s.value - half.value).norm() <= s.tail_bound + half.tail_bound + 1e-12);
        assert!((s.value - full.value).norm() > 1e-3);
    }

    #[test]
    fn strip_relation_examples() {
        let strip = StripDomain::new(1.0).unwrap();
        let r1 = strip_relation_residual(r(0.5), r(0.5), strip, pol(), DerivativePath::TermWise).unwrap();
        assert!(r1 < 1e-8, "{r1}");
        let strip2 = StripDomain::new(2.0).unwrap();
        let z = r(0.3) + e(2).scale(0.1);
        let w = r(0.7) - e(5).scale(0.2);
        let r2 = strip_relation_residual(z, w, strip2, pol(), DerivativePath::TermWise).unwrap();
        assert!(r2 < 1e-8, "{r2}");
        let fd = strip_relation_residual(
            r(0.5) + e(1).scale(0.3),
            r(0.5),
            strip2,
            pol(),
            DerivativePath::FiniteDifference(FiniteDiffConfig::default()),
        )
        .unwrap();
        assert!(fd < 1e-5, "{fd}");
        // (z + d)/2 leaves the strip once Re z > d
        assert!(matches!(
            strip_relation_residual(r(1.0 + 1e-6), r(0.5), strip, pol(), DerivativePath::TermWise),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn kernels_are_left_regular_in_z() {
        let cfg = FiniteDiffConfig::default();
        let strip = StripDomain::new(2.0).unwrap();
        let w = Octonion::new([0.9, 0.1, 0.0, -0.3, 0.0, 0.2, 0.0, 0.0]);
        let z = Octonion::new([1.1, 0.0, 0.4, 0.0, -0.2, 0.0, 0.1, 0.3]);
        let handles: Vec<(&str, FunctionHandle)> = vec![
            ("szego_strip", FunctionHandle::new(move |x| Ok(szego_strip(x, w, strip, pol(), EvalMethod::Series)?.value))),
            ("bergman_strip", FunctionHandle::new(move |x| Ok(bergman_strip(x, w, strip, pol())?.value))),
            ("szego_half", FunctionHandle::new(move |x| szego_half_space(x, w))),
            ("bergman_half", FunctionHandle::new(move |x| bergman_half_space(x, w))),
            ("szego_ball", FunctionHandle::new(move |x| szego_unit_ball(x, w.scale(0.4)))),
            ("bergman_ball", FunctionHandle::new(move |x| bergman_unit_ball(x, w.scale(0.4)))),
        ];
        for (name, h) in handles {
            let at = if name.ends_with("ball") { z.scale(0.3) } else { z };
            let res = apply_d_left(&h, at, cfg).unwrap().norm();
            assert!(res < 1e-6, "{name}: {res}");
        }
    }

    #[test]
    fn strip_tends_to_half_space() {
        let z = Octonion::new([0.3, 0.1, 0.0, 0.05, 0.0, 0.0, -0.1, 0.0]);
        let w = Octonion::new([0.2, 0.0, -0.1, 0.0, 0.05, 0.0, 0.0, 0.1]);
        let mut prev: Option<(f64, f64)> = None;
        for d in [2.0, 4.0, 8.0, 16.0] {
            let strip = StripDomain::new(d).unwrap();
            let es = (szego_strip(z, w, strip, pol(), EvalMethod::Series).unwrap().value
                - szego_half_space(z, w).unwrap())
            .norm();
            let eb = (bergman_strip(z, w, strip, pol()).unwrap().value - bergman_half_space(z, w).unwrap()).norm();
            if let Some((ps, pb)) = prev {
                assert!(es < ps && eb < pb);
            }
            prev = Some((es, eb));
        }
        let (es, eb) = prev.unwrap();
        assert!(es < 1e-8 && eb < 1e-8, "{es} {eb}");
    }

    #[test]
    fn half_space_limit_is_eighth_order() {
        // the +-n terms cancel to first order, so both gaps shrink by 2^8 per doubling
        let z = Octonion::new([0.3, 0.1, 0.0, 0.05, 0.0, 0.0, -0.1, 0.0]);
        let w = Octonion::new([0.2, 0.0, -0.1, 0.0, 0.05, 0.0, 0.0, 0.1]);
        let gap = |d: f64| {
            let strip = StripDomain::new(d).unwrap();
            let s = (szego_strip(z, w, strip, pol(), EvalMethod::Series).unwrap().value
                - szego_half_space(z, w).unwrap())
            .norm();
            let b = (bergman_strip(z, w, strip, pol()).unwrap().value - bergman_half_space(z, w).unwrap()).norm();
            (s, b)
        };
        let (s8, b8) = gap(8.0);
        let (s16, b16) = gap(16.0);
        assert!((s8 / s16 / 256.0 - 1.0).abs() < 0.03, "{}", s8 / s16);
        assert!((b8 / b16 / 256.0 - 1.0).abs() < 0.05, "{}", b8 / b16);
    }
}
