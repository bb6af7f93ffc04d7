use std::time::Instant;

use octokern::kernels::{bergman_half_space, bergman_strip, szego_half_space, szego_strip, EvalMethod, StripDomain};
use octokern::Octonion;

use crate::report::{CheckRow, RunReport};
use crate::{CliError, Result, Settings};

pub const SZEGO_EXPECTED_EXPONENT: f64 = -7.0;
pub const BERGMAN_EXPECTED_EXPONENT: f64 = -8.0;
/// Half-width of the accepted window around each expected exponent.
pub const EXPONENT_WINDOW: f64 = 0.5;

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// Gaps between strip and half-space kernels as the strip widens.
pub fn run_limit_study(d_values: &[f64], z: Octonion, w: Octonion, settings: &Settings) -> Result<RunReport> {
    if d_values.is_empty() {
        return Err(CliError::Usage("at least one d value is required".into()));
    }
    let pol = settings.policy()?;
    let start = Instant::now();
    let mut report = RunReport::new("limits", settings.seed);
    report.param("d_values", d_values);
    report.param("z", z.coords());
    report.param("w", w.coords());
    report.param("tail_tol", pol.tail_tol);

    let s_half = szego_half_space(z, w)?;
    let b_half = bergman_half_space(z, w)?;
    let mut szego_gaps = Vec::new();
    let mut bergman_gaps = Vec::new();
    for &d in d_values {
        let strip = StripDomain::new(d).map_err(|e| CliError::Usage(e.to_string()))?;
        let s = szego_strip(z, w, strip, pol, EvalMethod::Series)?;
        let b = bergman_strip(z, w, strip, pol)?;
        let gs = (s.value - s_half).norm();
        let gb = (b.value - b_half).norm();
        // the residual of a gap row is the gap itself; there is no tolerance
        report.push(CheckRow {
            residual: Some(gs),
            ..CheckRow::measurement("szego_gap", s.value).target(s_half).tail_bound(s.tail_bound).at_d(d)
        });
        report.push(CheckRow {
            residual: Some(gb),
            ..CheckRow::measurement("bergman_gap", b.value).target(b_half).tail_bound(b.tail_bound).at_d(d)
        });
        szego_gaps.push(gs);
        bergman_gaps.push(gb);
    }

    for (i, pair) in d_values.windows(2).enumerate() {
        if (pair[1] - 2.0 * pair[0]).abs() <= 1e-12 * pair[1] {
            report.push(CheckRow::measurement("szego_doubling_ratio", szego_gaps[i] / szego_gaps[i + 1]).at_d(pair[0]));
            report.push(
                CheckRow::measurement("bergman_doubling_ratio", bergman_gaps[i] / bergman_gaps[i + 1]).at_d(pair[0]),
            );
        }
    }

    if d_values.len() >= 2 {
        for (name, gaps, expected) in [
            ("szego_decay_exponent", &szego_gaps, SZEGO_EXPECTED_EXPONENT),
            ("bergman_decay_exponent", &bergman_gaps, BERGMAN_EXPECTED_EXPONENT),
        ] {
            let slope = log_log_slope(d_values, gaps);
            report.push(CheckRow::check(name, slope, (slope - expected).abs(), EXPONENT_WINDOW).target(expected));
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-7.0)).collect();
        assert!((log_log_slope(&xs, &ys) + 7.0).abs() < 1e-12);
    }

    #[test]
    fn single_d_has_no_fit() {
        let one = Octonion::real(1.0);
        let r = run_limit_study(&[4.0], one, one, &Settings::default()).unwrap();
        assert_eq!(r.results.len(), 2);
        assert!(r.row("szego_decay_exponent").is_none());
    }

    #[test]
    fn empty_list_is_usage_error() {
        let one = Octonion::real(1.0);
        assert!(matches!(run_limit_study(&[], one, one, &Settings::default()), Err(CliError::Usage(_))));
    }

    #[test]
    fn exterior_point_is_domain_error() {
        let z = Octonion::real(3.0);
        let r = run_limit_study(&[2.0, 4.0], z, Octonion::real(1.0), &Settings::default());
        assert!(matches!(r, Err(CliError::Core(octokern::Error::Domain(_)))));
    }
}
