//! The octonionic Cauchy–Riemann operator as a finite-difference residual,
//! the Cauchy kernel `q0(z) = conj(z)/|z|^8` and its closed-form
//! derivative in the real direction.

use std::sync::Arc;

use crate::algebra::Octonion;
use crate::error::{Error, Result};

type EvalFn = dyn Fn(Octonion) -> Result<Octonion> + Send + Sync;
type GuardFn = dyn Fn(Octonion) -> bool + Send + Sync;

/// A map `O -> O` consumed by the differential and integral operators.
///
/// Evaluation must be deterministic and safe to call from several threads
/// at once.
#[derive(Clone)]
pub struct FunctionHandle {
    eval: Arc<EvalFn>,
    guard: Option<Arc<GuardFn>>,
}

impl FunctionHandle {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(Octonion) -> Result<Octonion> + Send + Sync + 'static,
    {
        FunctionHandle {
            eval: Arc::new(f),
            guard: None,
        }
    }

    /// Wraps a map that cannot fail.
    pub fn total<F>(f: F) -> Self
    where
        F: Fn(Octonion) -> Octonion + Send + Sync + 'static,
    {
        Self::new(move |z| Ok(f(z)))
    }

    /// Restricts evaluation to points accepted by `guard`.
    pub fn with_guard<G>(mut self, guard: G) -> Self
    where
        G: Fn(Octonion) -> bool + Send + Sync + 'static,
    {
        self.guard = Some(Arc::new(guard));
        self
    }

    pub fn eval(&self, z: Octonion) -> Result<Octonion> {
        if let Some(g) = &self.guard {
            if !g(z) {
                return Err(Error::Domain(format!("point {z} rejected by domain guard")));
            }
        }
        (self.eval)(z)
    }

    /// `z -> f(z) * c` with the constant multiplied on the right.
    pub fn right_multiplied(&self, c: Octonion) -> Self {
        let inner = self.clone();
        FunctionHandle::new(move |z| Ok(inner.eval(z)? * c))
    }

    /// `z -> f(z + shift)`.
    pub fn translated(&self, shift: Octonion) -> Self {
        let inner = self.clone();
        FunctionHandle::new(move |z| inner.eval(z + shift))
    }
}

impl std::fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("guarded", &self.guard.is_some())
            .finish()
    }
}

/// Central-difference stencil.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stencil {
    /// `(f(x+h) - f(x-h)) / 2h`, error `O(h^2)`.
    ThreePoint,
    /// `(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h`, error `O(h^4)`.
    #[default]
    FivePoint,
}

/// Step size and stencil for central differences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiniteDiffConfig {
    pub h: f64,
    pub stencil: Stencil,
}

impl FiniteDiffConfig {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::Config(format!("finite-difference step must lie in (0,1), got {h}")));
        }
        Ok(FiniteDiffConfig {
            h,
            stencil: Stencil::default(),
        })
    }

    pub fn with_stencil(self, stencil: Stencil) -> Self {
        FiniteDiffConfig { stencil, ..self }
    }

    /// Central difference of a scalar-or-octonion valued map along `dir`.
    fn diff<T, F>(&self, f: F, z: Octonion, dir: Octonion) -> Result<T>
    where
        T: std::ops::Sub<Output = T> + std::ops::Add<Output = T> + Scale,
        F: Fn(Octonion) -> Result<T>,
    {
        let h = self.h;
        let step = dir.scale(h);
        match self.stencil {
            Stencil::ThreePoint => Ok((f(z + step)? - f(z - step)?).scaled(0.5 / h)),
            Stencil::FivePoint => {
                let near = f(z + step)? - f(z - step)?;
                let far = f(z + step.scale(2.0))? - f(z - step.scale(2.0))?;
                Ok((near.scaled(8.0) - far).scaled(1.0 / (12.0 * h)))
            }
        }
    }
}

impl Default for FiniteDiffConfig {
    fn default() -> Self {
        FiniteDiffConfig {
            h: 1e-5,
            stencil: Stencil::default(),
        }
    }
}

trait Scale {
    fn scaled(self, s: f64) -> Self;
}

impl Scale for f64 {
    fn scaled(self, s: f64) -> f64 {
        self * s
    }
}

impl Scale for Octonion {
    fn scaled(self, s: f64) -> Octonion {
        self.scale(s)
    }
}

/// `q0(z) = conj(z) / |z|^8`.
pub fn cauchy_kernel(z: Octonion) -> Result<Octonion> {
    let n2 = z.norm_sqr();
    if !(n2 >= 1e-60) {
        return Err(Error::Domain(format!(
            "Cauchy kernel at |z| = {:e}",
            n2.sqrt()
        )));
    }
    let n8 = (n2 * n2) * (n2 * n2);
    Ok(z.conj().scale(1.0 / n8))
}

/// `d/du0 q0(u) = 1/|u|^8 - 8 u0 conj(u) / |u|^10`.
pub fn dq0_dx0(u: Octonion) -> Result<Octonion> {
    let n2 = u.norm_sqr();
    if !(n2 >= 1e-60) {
        return Err(Error::Domain(format!(
            "Cauchy kernel derivative at |u| = {:e}",
            n2.sqrt()
        )));
    }
    let n8 = (n2 * n2) * (n2 * n2);
    let c = -8.0 * u.re() / (n8 * n2);
    let mut out = u.conj().scale(c);
    let mut re = out.coords();
    re[0] += 1.0 / n8;
    out = Octonion::new(re);
    Ok(out)
}

/// Central difference of `f` along coordinate `axis` at `z`.
pub fn partial(f: &FunctionHandle, z: Octonion, axis: usize, cfg: FiniteDiffConfig) -> Result<Octonion> {
    cfg.diff(|x| f.eval(x), z, Octonion::basis(axis))
}

/// All eight partial derivatives `[df/dx0, ..., df/dx7]`.
pub fn gradient(f: &FunctionHandle, z: Octonion, cfg: FiniteDiffConfig) -> Result<[Octonion; 8]> {
    let mut g = [Octonion::ZERO; 8];
    for (axis, slot) in g.iter_mut().enumerate() {
        *slot = partial(f, z, axis, cfg)?;
    }
    Ok(g)
}

/// `D f = df/dx0 + sum_i e_i * (df/dx_i)`.
pub fn apply_d_left(f: &FunctionHandle, z: Octonion, cfg: FiniteDiffConfig) -> Result<Octonion> {
    let g = gradient(f, z, cfg)?;
    Ok((1..8).fold(g[0], |acc, i| acc + Octonion::basis(i) * g[i]))
}

/// `f D = df/dx0 + sum_i (df/dx_i) * e_i`.
pub fn apply_d_right(f: &FunctionHandle, z: Octonion, cfg: FiniteDiffConfig) -> Result<Octonion> {
    let g = gradient(f, z, cfg)?;
    Ok((1..8).fold(g[0], |acc, i| acc + g[i] * Octonion::basis(i)))
}

/// Conjugated operator on a real-valued potential:
/// `dp/dx0 - sum_i e_i dp/dx_i`.
pub fn apply_d_conj_scalar<P>(p: P, z: Octonion, cfg: FiniteDiffConfig) -> Result<Octonion>
where
    P: Fn(Octonion) -> Result<f64>,
{
    let mut out = [0.0; 8];
    for (axis, slot) in out.iter_mut().enumerate() {
        let d: f64 = cfg.diff(&p, z, Octonion::basis(axis))?;
        *slot = if axis == 0 { d } else { -d };
    }
    Ok(Octonion::new(out))
}

/// Largest `|D f(z)|` over `points`.
pub fn o_regularity_residual(f: &FunctionHandle, points: &[Octonion], cfg: FiniteDiffConfig) -> Result<f64> {
    points.iter().try_fold(0.0_f64, |m, &z| {
        Ok(m.max(apply_d_left(f, z, cfg)?.norm()))
    })
}

/// The left-regular linear map `x1 - x2 e4`.
pub fn linear_counterexample() -> FunctionHandle {
    FunctionHandle::total(|z| Octonion::real(z[1]) - Octonion::basis(4).scale(z[2]))
}
