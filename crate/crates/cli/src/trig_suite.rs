use std::f64::consts::PI;
use std::time::Instant;

use octokern::regularity::{apply_d_left, FiniteDiffConfig, FunctionHandle};
use octokern::trig_series::{
    self, combined_relation_residuals, csc_cot_identity_residual, duplication_residual, sec_definition_residual,
    tan_cot_relation_residual, SeriesValue, TruncationPolicy,
};
use octokern::Octonion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{CheckRow, RunReport};
use crate::{CliError, Result, Settings};

pub const IDENTITY_TOL: f64 = 1e-9;
pub const REGULARITY_TOL: f64 = 1e-6;
/// Below this the combined relation counts as vanishing at a point.
pub const VANISHING_TOL: f64 = 1e-9;

/// A point `x0 + v` with `x0` uniform in `[0, 2 pi)` and a uniformly oriented
/// imaginary part of norm in `[0.4, 1.2]`. All series poles are real, so the
/// distance to every pole is at least 0.4.
pub fn random_nonsingular_point(rng: &mut ChaCha8Rng) -> Octonion {
    let x0 = rng.gen_range(0.0..2.0 * PI);
    let r = rng.gen_range(0.4..1.2);
    let mut v = [0.0; 8];
    loop {
        for x in v.iter_mut().skip(1) {
            *x = rng.gen_range(-1.0..1.0);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            for x in v.iter_mut().skip(1) {
                *x *= r / n;
            }
            break;
        }
    }
    v[0] = x0;
    Octonion::new(v)
}

type SeriesFn = fn(Octonion, TruncationPolicy) -> octokern::Result<SeriesValue>;

pub const SERIES: [(&str, SeriesFn); 4] = [
    ("cot", trig_series::cot),
    ("tan", trig_series::tan),
    ("csc", trig_series::csc),
    ("sec", trig_series::sec),
];

/// Largest left Cauchy–Riemann residual of a series over `points`.
pub fn series_regularity(series: SeriesFn, points: &[Octonion], pol: TruncationPolicy, fd: FiniteDiffConfig) -> Result<f64> {
    let f = FunctionHandle::new(move |z| Ok(series(z, pol)?.value));
    let mut worst = 0.0_f64;
    for &z in points {
        worst = worst.max(apply_d_left(&f, z, fd)?.norm());
    }
    Ok(worst)
}

pub fn run_trig_suite(points: usize, settings: &Settings) -> Result<RunReport> {
    if points == 0 {
        return Err(CliError::Usage("points must be at least 1".into()));
    }
    let pol = settings.policy()?;
    let fd = settings.fd()?;
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let zs: Vec<Octonion> = (0..points).map(|_| random_nonsingular_point(&mut rng)).collect();

    let mut report = RunReport::new("trig", settings.seed);
    report.param("points", points);
    report.param("tail_tol", pol.tail_tol);
    report.param("fd_step", fd.h);

    let mut tail = 0.0_f64;
    for &z in &zs {
        for (_, series) in SERIES {
            tail = tail.max(series(z, pol)?.tail_bound);
        }
    }

    let identities: [(&str, fn(Octonion, TruncationPolicy) -> octokern::Result<f64>); 4] = [
        ("duplication", duplication_residual),
        ("tan_cot_relation", tan_cot_relation_residual),
        ("csc_cot_identity", csc_cot_identity_residual),
        ("sec_definition", sec_definition_residual),
    ];
    for (name, residual) in identities {
        let mut worst = 0.0_f64;
        for &z in &zs {
            worst = worst.max(residual(z, pol)?);
        }
        report.push(CheckRow::check(name, worst, worst, IDENTITY_TOL).target(0.0).tail_bound(tail));
    }

    let mut single_term_max = 0.0_f64;
    let mut single_term_min = f64::INFINITY;
    let mut composed_max = 0.0_f64;
    for &z in &zs {
        let c = combined_relation_residuals(z, pol)?;
        single_term_max = single_term_max.max(c.single_term);
        single_term_min = single_term_min.min(c.single_term);
        composed_max = composed_max.max(c.composed);
    }
    report.push(
        CheckRow::check("combined_relation_single_term", single_term_max, single_term_max, VANISHING_TOL)
            .target(0.0)
            .informational()
            .note("csc + tan - tan(z/2)/64 = 128 cot(2z)"),
    );
    report.push(
        CheckRow::measurement("combined_relation_single_term_min", single_term_min)
            .informational()
            .note("smallest single-term residual over the points"),
    );
    report.push(
        CheckRow::check("combined_relation_composed", composed_max, composed_max, VANISHING_TOL)
            .target(0.0)
            .informational()
            .note("csc + tan - tan(z/2)/64 = 2 cot(z) - 128 cot(2z), composed from the other identities"),
    );

    for (name, series) in SERIES {
        let worst = series_regularity(series, &zs, pol, fd)?;
        report.push(CheckRow::check(format!("regularity_{name}"), worst, worst, REGULARITY_TOL).target(0.0));
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_flags_one_candidate() {
        let r = run_trig_suite(5, &Settings::default()).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert!(r.row("combined_relation_composed").unwrap().pass);
        assert!(!r.row("combined_relation_single_term").unwrap().pass);
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(run_trig_suite(0, &Settings::default()), Err(CliError::Usage(_))));
        let s = Settings {
            tail_tol: 0.0,
            ..Settings::default()
        };
        assert!(matches!(run_trig_suite(5, &s), Err(CliError::Usage(_))));
    }

    #[test]
    fn points_stay_off_the_real_axis() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let z = random_nonsingular_point(&mut rng);
            let r = z.im().norm();
            assert!((0.4 - 1e-12..=1.2 + 1e-12).contains(&r));
            assert!((0.0..2.0 * PI).contains(&z.re()));
        }
    }
}
