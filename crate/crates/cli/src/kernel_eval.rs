use std::str::FromStr;
use std::time::Instant;

use octokern::kernels::{
    bergman_half_space, bergman_strip, bergman_strip_closed_form, bergman_unit_ball, szego_half_space, szego_strip,
    szego_unit_ball, CotScaling, EvalMethod, KernelEval, StripDomain,
};
use octokern::Octonion;

use crate::report::{CheckRow, RunReport};
use crate::{CliError, Result, Settings};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    SzegoBall,
    BergmanBall,
    SzegoStrip,
    BergmanStrip,
    SzegoHalfspace,
    BergmanHalfspace,
}

impl KernelKind {
    pub const ALL: [KernelKind; 6] = [
        KernelKind::SzegoBall,
        KernelKind::BergmanBall,
        KernelKind::SzegoStrip,
        KernelKind::BergmanStrip,
        KernelKind::SzegoHalfspace,
        KernelKind::BergmanHalfspace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::SzegoBall => "szego_ball",
            KernelKind::BergmanBall => "bergman_ball",
            KernelKind::SzegoStrip => "szego_strip",
            KernelKind::BergmanStrip => "bergman_strip",
            KernelKind::SzegoHalfspace => "szego_halfspace",
            KernelKind::BergmanHalfspace => "bergman_halfspace",
        }
    }

    fn on_strip(self) -> bool {
        matches!(self, KernelKind::SzegoStrip | KernelKind::BergmanStrip)
    }
}

impl FromStr for KernelKind {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        KernelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown kernel {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    #[default]
    Series,
    Closed,
    Both,
}

impl FromStr for MethodChoice {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(MethodChoice::Series),
            "closed" => Ok(MethodChoice::Closed),
            "both" => Ok(MethodChoice::Both),
            _ => Err(CliError::Usage(format!("unknown method {s:?} (series, closed, both)"))),
        }
    }
}

/// Evaluates a strip kernel by series or closed form.
pub fn strip_kernel(
    kind: KernelKind,
    z: Octonion,
    w: Octonion,
    strip: StripDomain,
    settings: &Settings,
    method: EvalMethod,
) -> Result<KernelEval> {
    let pol = settings.policy()?;
    Ok(match (kind, method) {
        (KernelKind::SzegoStrip, m) => szego_strip(z, w, strip, pol, m)?,
        (KernelKind::BergmanStrip, EvalMethod::Series) => bergman_strip(z, w, strip, pol)?,
        (KernelKind::BergmanStrip, EvalMethod::ClosedForm) => {
            bergman_strip_closed_form(z, w, strip, pol, CotScaling::HalfPeriod)?
        }
        _ => return Err(CliError::Usage(format!("{} is not a strip kernel", kind.name()))),
    })
}

/// Evaluates any kernel at `(z, w)`; `d` is required for strip kernels.
pub fn kernel_value(kind: KernelKind, z: Octonion, w: Octonion, d: Option<f64>, settings: &Settings) -> Result<Octonion> {
    Ok(match kind {
        KernelKind::SzegoBall => szego_unit_ball(z, w)?,
        KernelKind::BergmanBall => bergman_unit_ball(z, w)?,
        KernelKind::SzegoHalfspace => szego_half_space(z, w)?,
        KernelKind::BergmanHalfspace => bergman_half_space(z, w)?,
        KernelKind::SzegoStrip | KernelKind::BergmanStrip => {
            let d = d.ok_or_else(|| CliError::Usage(format!("{} needs --d", kind.name())))?;
            strip_kernel(kind, z, w, StripDomain::new(d)?, settings, EvalMethod::Series)?.value
        }
    })
}

pub fn eval_kernel(
    kind: KernelKind,
    z: Octonion,
    w: Octonion,
    d: Option<f64>,
    method: MethodChoice,
    settings: &Settings,
) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new("eval", settings.seed);
    report.param("kernel", kind.name());
    report.param("z", z.coords());
    report.param("w", w.coords());
    if let Some(d) = d {
        report.param("d", d);
    }

    if !kind.on_strip() {
        if method != MethodChoice::Series && method != MethodChoice::Closed {
            return Err(CliError::Usage(format!("{} has a single closed form", kind.name())));
        }
        let v = kernel_value(kind, z, w, d, settings)?;
        report.push(CheckRow::measurement("value", v));
        report.elapsed_ms = start.elapsed().as_millis() as u64;
        return Ok(report);
    }

    let d = d.ok_or_else(|| CliError::Usage(format!("{} needs --d", kind.name())))?;
    let strip = StripDomain::new(d).map_err(|e| CliError::Usage(e.to_string()))?;
    report.param("method", format!("{method:?}").to_lowercase());
    report.param("tail_tol", settings.tail_tol);
    let series = || strip_kernel(kind, z, w, strip, settings, EvalMethod::Series);
    let closed = || strip_kernel(kind, z, w, strip, settings, EvalMethod::ClosedForm);
    match method {
        MethodChoice::Series => {
            let s = series()?;
            report.push(CheckRow::measurement("value", s.value).tail_bound(s.tail_bound));
        }
        MethodChoice::Closed => {
            let c = closed()?;
            report.push(CheckRow::measurement("value", c.value).tail_bound(c.tail_bound));
        }
        MethodChoice::Both => {
            let s = series()?;
            let c = closed()?;
            report.push(CheckRow::measurement("value", s.value).tail_bound(s.tail_bound));
            report.push(CheckRow::measurement("closed_form", c.value).tail_bound(c.tail_bound));
            let tail = s.tail_bound + c.tail_bound;
            let delta = (s.value - c.value).norm();
            report.push(
                CheckRow::check("cross_method_delta", delta, delta, tail + 1e-12 * s.value.norm().max(1.0))
                    .target(0.0)
                    .tail_bound(tail),
            );
            if kind == KernelKind::BergmanStrip {
                let pol = settings.policy()?;
                let full = bergman_strip_closed_form(z, w, strip, pol, CotScaling::FullPeriod)?;
                let delta = (s.value - full.value).norm();
                report.push(
                    CheckRow::check("full_period_scaling_delta", full.value, delta, tail + full.tail_bound + 1e-12)
                        .target(s.value)
                        .tail_bound(full.tail_bound)
                        .informational()
                        .note("closed form with cot((pi/d) u) instead of cot((pi/2d) u)"),
                );
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Octonion {
        Octonion::real(x)
    }

    #[test]
    fn half_space_examples() {
        let s = Settings::default();
        let rep = eval_kernel(KernelKind::SzegoHalfspace, r(1.0), r(1.0), None, MethodChoice::Series, &s).unwrap();
        assert_eq!(rep.results[0].value, r(0.0078125).into());
        let rep = eval_kernel(KernelKind::BergmanHalfspace, r(1.0), r(1.0), None, MethodChoice::Series, &s).unwrap();
        assert_eq!(rep.results[0].value, r(0.0546875).into());
    }

    #[test]
    fn strip_cross_method() {
        let s = Settings::default();
        for kind in [KernelKind::SzegoStrip, KernelKind::BergmanStrip] {
            let rep = eval_kernel(kind, r(0.3), r(0.4), Some(1.0), MethodChoice::Both, &s).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures());
        }
        let rep = eval_kernel(KernelKind::BergmanStrip, r(0.3), r(0.4), Some(1.0), MethodChoice::Both, &s).unwrap();
        assert!(!rep.row("full_period_scaling_delta").unwrap().pass);
    }

    #[test]
    fn errors() {
        let s = Settings::default();
        assert!(matches!(
            eval_kernel(KernelKind::SzegoStrip, r(0.5), r(0.5), None, MethodChoice::Series, &s),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            eval_kernel(KernelKind::SzegoStrip, r(1.5), r(0.5), Some(1.0), MethodChoice::Series, &s),
            Err(CliError::Core(octokern::Error::Domain(_)))
        ));
        assert!("nope".parse::<KernelKind>().is_err());
        assert_eq!("bergman_ball".parse::<KernelKind>().unwrap(), KernelKind::BergmanBall);
    }
}
