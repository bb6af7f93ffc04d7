//! Seeded Monte Carlo integration over spheres, balls, strip boundaries and
//! strip volumes, and the inner products and reproducing formulas built on
//! it.
//!
//! Samples are drawn in fixed-size chunks; chunk `k` uses a ChaCha8 stream
//! keyed by `(seed, k)`. Chunk partial sums are combined by a fixed pairwise
//! tree in chunk order, so an estimate depends only on `(seed, samples,
//! chunk)` and never on the number of worker threads.
//!
//! Unbounded hyperplanes are truncated to the 7-disk of radius `R`. Inside
//! the disk the radius is drawn from the compactified coordinate
//! `t = r/(c + r)` with density proportional to `t^6`, i.e.
//!
//! ```text
//!   p(x) = 7c / (T^7 |S^6| (c + |x|)^8),   T = R/(c + R),
//! ```
//!
//! which is uniform near the origin and falls off like `|x|^-8`, so integrands
//! decaying like `|x|^-14` keep a bounded weighted value out to `R`.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::algebra::Octonion;
use crate::error::{Error, Result};
use crate::kernels::{
    bergman_strip_series_at, bergman_unit_ball, szego_strip_series_at, szego_unit_ball, StripDomain,
};
use crate::regularity::{cauchy_kernel, FunctionHandle};
use crate::trig_series::TruncationPolicy;

/// `3/pi^4`, the reciprocal of the surface area of the unit 7-sphere.
pub const CAUCHY_NORMALIZATION: f64 = 3.0 / (PI * PI * PI * PI);

/// Surface area of the unit 7-sphere in R^8.
pub const UNIT_S7_AREA: f64 = PI * PI * PI * PI / 3.0;

/// Volume of the unit 8-ball.
pub const UNIT_B8_VOLUME: f64 = PI * PI * PI * PI / 24.0;

/// Surface area of the unit 6-sphere in R^7.
pub const UNIT_S6_AREA: f64 = 16.0 * PI * PI * PI / 15.0;

/// Assumed power-law decay of integrands over truncated hyperplanes, used
/// for the attached truncation-tail estimate.
pub const TAIL_DECAY_ORDER: f64 = 14.0;

/// Number of probe points on the truncation sphere for the tail estimate.
const TAIL_PROBES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McConfig {
    pub seed: u64,
    pub samples: usize,
    /// Truncation radius of unbounded hyperplane directions.
    pub radius: f64,
    /// Samples per chunk (the unit of parallel work and of RNG substreams).
    pub chunk: usize,
    /// Scale `c` of the compactified radial sampling on hyperplanes; `None`
    /// picks `0.1 d` on strips and `0.1` on the half-space boundary.
    pub radial_scale: Option<f64>,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            seed: 0,
            samples: 1_000_000,
            radius: 50.0,
            chunk: 16_384,
            radial_scale: None,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if !(self.radius > 0.0) {
            return Err(Error::Config(format!("radius must be positive, got {}", self.radius)));
        }
        if self.chunk == 0 {
            return Err(Error::Config("chunk must be at least 1".into()));
        }
        if matches!(self.radial_scale, Some(c) if !(c > 0.0)) {
            return Err(Error::Config("radial scale must be positive".into()));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        McConfig { seed, ..self }
    }

    pub fn with_samples(self, samples: usize) -> Self {
        McConfig { samples, ..self }
    }

    fn radial_scale_for(&self, region: &Region) -> f64 {
        self.radial_scale.unwrap_or(match region {
            Region::StripBoundary(s) | Region::StripVolume(s) => 0.1 * s.width(),
            _ => 0.1,
        })
    }

    fn chunks(&self) -> usize {
        self.samples.div_ceil(self.chunk)
    }

    fn chunk_len(&self, k: usize) -> usize {
        (self.samples - k * self.chunk).min(self.chunk)
    }
}

/// Integration domains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Sphere { center: Octonion, r: f64 },
    Ball { center: Octonion, r: f64 },
    /// Both hyperplanes `x0 = 0` and `x0 = d`, truncated transversally.
    StripBoundary(StripDomain),
    /// `0 < x0 < d`, truncated transversally.
    StripVolume(StripDomain),
    /// The hyperplane `x0 = 0`, truncated.
    HalfspaceBoundary,
}

impl Region {
    pub fn sphere(center: Octonion, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Config(format!("sphere radius must be positive, got {r}")));
        }
        Ok(Region::Sphere { center, r })
    }

    pub fn ball(center: Octonion, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Config(format!("ball radius must be positive, got {r}")));
        }
        Ok(Region::Ball { center, r })
    }

    /// Exact measure of the region after truncation at `radius`.
    pub fn measure(&self, radius: f64) -> f64 {
        let disk = UNIT_S6_AREA / 7.0 * radius.powi(7);
        match *self {
            Region::Sphere { r, .. } => UNIT_S7_AREA * r.powi(7),
            Region::Ball { r, .. } => UNIT_B8_VOLUME * r.powi(8),
            Region::StripBoundary(_) => 2.0 * disk,
            Region::StripVolume(s) => s.width() * disk,
            Region::HalfspaceBoundary => disk,
        }
    }

    fn is_unbounded(&self) -> bool {
        matches!(
            self,
            Region::StripBoundary(_) | Region::StripVolume(_) | Region::HalfspaceBoundary
        )
    }
}

/// One quadrature node. `weight` already includes the `1/samples` factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub point: Octonion,
    pub weight: f64,
    /// Outward unit normal on surface regions.
    pub normal: Option<Octonion>,
}

/// A Monte Carlo estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub value: Octonion,
    /// Standard error of `value` (norm of the per-coordinate errors).
    pub std_error: f64,
    pub samples: usize,
    /// Estimated contribution of the region beyond the truncation radius.
    pub truncation_tail: f64,
    pub warnings: Vec<String>,
}

impl McEstimate {
    fn scaled(self, s: f64) -> Self {
        McEstimate {
            value: self.value.scale(s),
            std_error: self.std_error * s.abs(),
            truncation_tail: self.truncation_tail * s.abs(),
            ..self
        }
    }
}

fn gaussian_direction<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    loop {
        let mut v = [0.0; N];
        for x in &mut v {
            *x = rng.sample(StandardNormal);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-300 {
            return v.map(|x| x / n);
        }
    }
}

/// Transverse point in the radius-`radius` 7-disk and its inverse density.
fn transverse(rng: &mut ChaCha8Rng, radius: f64, c: f64) -> ([f64; 7], f64) {
    let dir = gaussian_direction::<7>(rng);
    let t_max = radius / (c + radius);
    let u: f64 = rng.gen();
    let t = t_max * u.powf(1.0 / 7.0);
    let r = c * t / (1.0 - t);
    let inv_density = t_max.powi(7) * UNIT_S6_AREA * (c + r).powi(8) / (7.0 * c);
    (dir.map(|x| x * r), inv_density)
}

fn with_real(x0: f64, rest: &[f64; 7]) -> Octonion {
    let mut c = [0.0; 8];
    c[0] = x0;
    c[1..].copy_from_slice(rest);
    Octonion::new(c)
}

fn chunk_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

/// Draws sample `i` of a chunk.
fn draw(region: &Region, cfg: &McConfig, rng: &mut ChaCha8Rng, i: usize) -> Sample {
    let n = cfg.samples as f64;
    match *region {
        Region::Sphere { center, r } => {
            let dir = Octonion::new(gaussian_direction::<8>(rng));
            Sample {
                point: center + dir.scale(r),
                weight: UNIT_S7_AREA * r.powi(7) / n,
                normal: Some(dir),
            }
        }
        Region::Ball { center, r } => {
            let dir = Octonion::new(gaussian_direction::<8>(rng));
            let u: f64 = rng.gen();
            Sample {
                point: center + dir.scale(r * u.powf(0.125)),
                weight: UNIT_B8_VOLUME * r.powi(8) / n,
                normal: None,
            }
        }
        Region::StripBoundary(s) => {
            // alternate the two hyperplanes within every chunk
            let (x, inv) = transverse(rng, cfg.radius, cfg.radial_scale_for(region));
            let (x0, normal) = if i % 2 == 0 { (0.0, -Octonion::ONE) } else { (s.width(), Octonion::ONE) };
            Sample {
                point: with_real(x0, &x),
                weight: 2.0 * inv / n,
                normal: Some(normal),
            }
        }
        Region::StripVolume(s) => {
            let x0 = s.width() * rng.gen::<f64>();
            let (x, inv) = transverse(rng, cfg.radius, cfg.radial_scale_for(region));
            Sample {
                point: with_real(x0, &x),
                weight: s.width() * inv / n,
                normal: None,
            }
        }
        Region::HalfspaceBoundary => {
            let (x, inv) = transverse(rng, cfg.radius, cfg.radial_scale_for(region));
            Sample {
                point: with_real(0.0, &x),
                weight: inv / n,
                normal: Some(-Octonion::ONE),
            }
        }
    }
}

/// The full sample stream, chunk by chunk, exactly as used by [`integrate`].
pub fn sample<'a>(region: &'a Region, cfg: &'a McConfig) -> impl Iterator<Item = Sample> + 'a {
    (0..cfg.chunks()).flat_map(move |k| {
        let mut rng = chunk_rng(cfg.seed, k);
        (0..cfg.chunk_len(k)).map(move |i| draw(region, cfg, &mut rng, i))
    })
}

#[derive(Clone, Copy, Debug)]
struct Partial {
    sum: Octonion,
    sum_sq: f64,
}

fn tree_reduce(mut parts: Vec<Partial>) -> Partial {
    if parts.is_empty() {
        return Partial {
            sum: Octonion::ZERO,
            sum_sq: 0.0,
        };
    }
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|p| match p {
                [a, b] => Partial {
                    sum: a.sum + b.sum,
                    sum_sq: a.sum_sq + b.sum_sq,
                },
                [a] => *a,
                _ => unreachable!(),
            })
            .collect();
    }
    parts[0]
}

/// Estimates `int_region g(sample) dmeasure`, where the integrand receives the
/// sample point and its outward normal.
pub fn integrate<F>(region: &Region, cfg: &McConfig, integrand: F) -> Result<McEstimate>
where
    F: Fn(Octonion, Option<Octonion>) -> Result<Octonion> + Sync,
{
    cfg.validate()?;
    let n = cfg.samples as f64;
    let parts: Vec<Partial> = (0..cfg.chunks())
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_rng(cfg.seed, k);
            let mut sum = Octonion::ZERO;
            let mut sum_sq = 0.0;
            for i in 0..cfg.chunk_len(k) {
                let s = draw(region, cfg, &mut rng, i);
                // single-sample estimate of the integral
                let y = integrand(s.point, s.normal)?.scale(s.weight * n);
                sum += y;
                sum_sq += y.norm_sqr();
            }
            Ok(Partial { sum, sum_sq })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = tree_reduce(parts);
    let mean = total.sum.scale(1.0 / n);
    let var = (total.sum_sq / n - mean.norm_sqr()).max(0.0);
    let std_error = (var / n).sqrt();

    let truncation_tail = if region.is_unbounded() {
        truncation_tail(region, cfg, &integrand)?
    } else {
        0.0
    };
    let mut warnings = Vec::new();
    if truncation_tail > 0.1 * mean.norm() {
        warnings.push(format!(
            "truncation tail estimate {truncation_tail:e} exceeds 10% of |estimate| = {:e}",
            mean.norm()
        ));
    }
    Ok(McEstimate {
        value: mean,
        std_error,
        samples: cfg.samples,
        truncation_tail,
        warnings,
    })
}

/// Power-law tail beyond the truncation radius, anchored at the largest
/// integrand magnitude seen on the truncation sphere of each hyperplane
/// slice: `|S^6| R^7 max|g(R)| / (k - 7)` per unit of `x0`-extent.
fn truncation_tail<F>(region: &Region, cfg: &McConfig, integrand: &F) -> Result<f64>
where
    F: Fn(Octonion, Option<Octonion>) -> Result<Octonion>,
{
    let r = cfg.radius;
    let mut rng = chunk_rng(cfg.seed ^ 0x5eed_7a11, usize::MAX);
    let slices: Vec<(f64, Option<Octonion>, f64)> = match *region {
        Region::StripBoundary(s) => vec![(0.0, Some(-Octonion::ONE), 1.0), (s.width(), Some(Octonion::ONE), 1.0)],
        Region::StripVolume(s) => (0..4)
            .map(|j| (s.width() * (j as f64 + 0.5) / 4.0, None, s.width() / 4.0))
            .collect(),
        Region::HalfspaceBoundary => vec![(0.0, Some(-Octonion::ONE), 1.0)],
        _ => return Ok(0.0),
    };
    let mut tail = 0.0;
    for (x0, normal, extent) in slices {
        let mut peak = 0.0_f64;
        for _ in 0..TAIL_PROBES {
            let dir = gaussian_direction::<7>(&mut rng);
            let p = with_real(x0, &dir.map(|x| x * r));
            peak = peak.max(integrand(p, normal)?.norm());
        }
        tail += extent * UNIT_S6_AREA * r.powi(7) * peak / (TAIL_DECAY_ORDER - 7.0);
    }
    Ok(tail)
}

fn require_sphere(region: &Region) -> Result<(Octonion, f64)> {
    match *region {
        Region::Sphere { center, r } => Ok((center, r)),
        other => Err(Error::Config(format!("expected a sphere region, got {other:?}"))),
    }
}

/// `int_{sphere} n(z) f(z) dS`.
pub fn cauchy_theorem_integral(f: &FunctionHandle, region: &Region, cfg: &McConfig) -> Result<McEstimate> {
    require_sphere(region)?;
    integrate(region, cfg, |z, n| Ok(n.expect("sphere samples carry normals") * f.eval(z)?))
}

/// `|int_{sphere} n(z) f(z) dS|`.
pub fn cauchy_theorem_check(f: &FunctionHandle, region: &Region, cfg: &McConfig) -> Result<f64> {
    Ok(cauchy_theorem_integral(f, region, cfg)?.value.norm())
}

/// Placement of brackets in the Cauchy integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bracketing {
    /// `q0(w - z) (n(w) f(w))`, the valid formula.
    NormalFirst,
    /// `(q0(w - z) n(w)) f(w)`.
    KernelFirst,
}

/// `(3/pi^4) int q0(w - z) (n(w) f(w)) dS(w)` over a sphere.
pub fn cauchy_formula_reproduce(f: &FunctionHandle, z: Octonion, region: &Region, cfg: &McConfig) -> Result<McEstimate> {
    cauchy_formula_reproduce_with(f, z, region, cfg, Bracketing::NormalFirst)
}

pub fn cauchy_formula_reproduce_with(
    f: &FunctionHandle,
    z: Octonion,
    region: &Region,
    cfg: &McConfig,
    bracketing: Bracketing,
) -> Result<McEstimate> {
    require_sphere(region)?;
    let est = integrate(region, cfg, |w, n| {
        let n = n.expect("sphere samples carry normals");
        let q = cauchy_kernel(w - z)?;
        let fw = f.eval(w)?;
        Ok(match bracketing {
            Bracketing::NormalFirst => q * (n * fw),
            Bracketing::KernelFirst => (q * n) * fw,
        })
    })?;
    Ok(est.scaled(CAUCHY_NORMALIZATION))
}

/// `(f, g)_{S7} = (3/pi^4) int_{S7} (conj(g(z)) conj(z)) (z f(z)) dS`.
pub fn inner_product_hardy_ball(f: &FunctionHandle, g: &FunctionHandle, cfg: &McConfig) -> Result<McEstimate> {
    let region = Region::sphere(Octonion::ZERO, 1.0)?;
    let est = integrate(&region, cfg, |z, _| {
        Ok((g.eval(z)?.conj() * z.conj()) * (z * f.eval(z)?))
    })?;
    Ok(est.scaled(CAUCHY_NORMALIZATION))
}

/// `(f, g)_{B8} = (3/pi^4) int_{B8} (conj(g) conj(z)/|z|) (z/|z| f) dV`,
/// with the integrand at `z = 0` taken as `conj(g(0)) f(0)`.
pub fn inner_product_bergman_ball(f: &FunctionHandle, g: &FunctionHandle, cfg: &McConfig) -> Result<McEstimate> {
    let region = Region::ball(Octonion::ZERO, 1.0)?;
    let est = integrate(&region, cfg, |z, _| {
        let gz = g.eval(z)?.conj();
        let fz = f.eval(z)?;
        let r = z.norm();
        if r == 0.0 {
            return Ok(gz * fz);
        }
        let unit = z.scale(1.0 / r);
        Ok((gz * unit.conj()) * (unit * fz))
    })?;
    Ok(est.scaled(CAUCHY_NORMALIZATION))
}

/// `(f, S(., w))_{S7}`, expected to equal `f(w)`.
pub fn szego_reproduce_ball(f: &FunctionHandle, w: Octonion, cfg: &McConfig) -> Result<McEstimate> {
    let kernel = FunctionHandle::new(move |z| szego_unit_ball(z, w));
    inner_product_hardy_ball(f, &kernel, cfg)
}

/// `(f, B(., w))_{B8}`, expected to equal `f(w)`.
pub fn bergman_reproduce_ball(f: &FunctionHandle, w: Octonion, cfg: &McConfig) -> Result<McEstimate> {
    let kernel = FunctionHandle::new(move |z| bergman_unit_ball(z, w));
    inner_product_bergman_ball(f, &kernel, cfg)
}

/// `(3/pi^4) int_{dS} S(z, w) f(w) dS(w)` over both boundary hyperplanes,
/// where `S(z, w) = sum_n (-1)^n (conj(z) + w + 2dn)/|conj(z) + w + 2dn|^8`
/// equals `conj(S(w, z))`. Expected to equal `f(z)` for interior `z` and to
/// vanish for exterior `z`.
///
/// `f` must be left O-regular near the closed strip and decay like
/// `|w|^-7` along the boundary (shifted Cauchy kernels qualify).
pub fn szego_reproduce_strip(
    f: &FunctionHandle,
    z: Octonion,
    strip: StripDomain,
    pol: TruncationPolicy,
    cfg: &McConfig,
) -> Result<McEstimate> {
    let d = strip.width();
    let region = Region::StripBoundary(strip);
    let est = integrate(&region, cfg, |w, _| {
        let k = szego_strip_series_at(z + w.conj(), d, pol)?.value;
        Ok(k * f.eval(w)?)
    })?;
    Ok(est.scaled(CAUCHY_NORMALIZATION))
}

/// `(3/pi^4) int_S conj(B(w, z)) f(w) dV(w)` over the strip volume.
/// Constants are not square integrable on the strip; use decaying `f`.
pub fn bergman_reproduce_strip(
    f: &FunctionHandle,
    z: Octonion,
    strip: StripDomain,
    pol: TruncationPolicy,
    cfg: &McConfig,
) -> Result<McEstimate> {
    let d = strip.width();
    let region = Region::StripVolume(strip);
    let est = integrate(&region, cfg, |w, _| {
        let k = bergman_strip_series_at(w + z.conj(), d, pol)?.value.conj();
        Ok(k * f.eval(w)?)
    })?;
    Ok(est.scaled(CAUCHY_NORMALIZATION))
}

/// `w -> q0(w - c)`, the canonical decaying O-regular test function.
pub fn shifted_cauchy_kernel(c: Octonion) -> FunctionHandle {
    FunctionHandle::new(move |w| cauchy_kernel(w - c))
}
