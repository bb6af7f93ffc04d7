use std::time::Instant;

use octokern::{associator, Octonion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{CheckRow, RunReport};
use crate::{CliError, Result};

/// Componentwise bound on sampled inputs.
pub const COMPONENT_BOUND: f64 = 10.0;
/// Absolute bound for the quartic and cubic identities.
pub const IDENTITY_TOL: f64 = 1e-11;
/// Relative bound for norm composition and inverses.
pub const RELATIVE_TOL: f64 = 1e-12;
/// Componentwise bound between the two multiplication algorithms.
pub const MULTIPLICATION_TOL: f64 = 1e-14;

/// Uniform in `[-10, 10]^8`, rejected outside the norm-10 ball.
pub fn random_octonion(rng: &mut ChaCha8Rng) -> Octonion {
    loop {
        let o = Octonion::new(std::array::from_fn(|_| rng.gen_range(-COMPONENT_BOUND..COMPONENT_BOUND)));
        if o.norm() <= COMPONENT_BOUND {
            return o;
        }
    }
}

#[derive(Default)]
struct Max(f64);

impl Max {
    fn see(&mut self, x: f64) {
        // a NaN residual sticks, so it surfaces as a failure
        if !(x <= self.0) && !self.0.is_nan() {
            self.0 = x;
        }
    }
}

pub fn run_algebra_suite(trials: usize, seed: u64) -> Result<RunReport> {
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moufang = Max::default();
    let mut flexible = Max::default();
    let mut pair = Max::default();
    let mut pair_mirror = Max::default();
    let mut bb_real = Max::default();
    let mut scalar_real = Max::default();
    let mut composition = Max::default();
    let mut anti = Max::default();
    let mut alt_left = Max::default();
    let mut alt_right = Max::default();
    let mut table_cd = Max::default();
    let mut inverse = Max::default();

    for _ in 0..trials {
        let a = random_octonion(&mut rng);
        let b = random_octonion(&mut rng);
        let c = random_octonion(&mut rng);
        moufang.see(((a * b) * (c * a) - a * ((b * c) * a)).norm());
        flexible.see(((a * b) * a - a * (b * a)).norm());
        let bb = b.conj() * b;
        pair.see(((a * b.conj()) * b - a * bb).norm());
        pair_mirror.see(((a * b.conj()) * b - b.conj() * (b * a)).norm());
        bb_real.see((bb - Octonion::real(b.norm_sqr())).norm());
        scalar_real.see((((b * (a.conj() * a)) * c).re() - ((b * a.conj()) * (a * c)).re()).abs());
        let scale = a.norm() * b.norm();
        if scale > 0.0 {
            composition.see(((a * b).norm() - scale).abs() / scale);
        }
        anti.see(((a * b).conj() - b.conj() * a.conj()).norm());
        alt_left.see(associator(&a, &a, &b).value.norm());
        alt_right.see(associator(&b, &a, &a).value.norm());
        table_cd.see((a.mul_table(&b) - a.mul_cayley_dickson(&b)).max_abs());
        if a.norm() > 0.1 {
            inverse.see((a * a.inverse()? - Octonion::ONE).norm());
        }
    }

    let mut units = 0.0_f64;
    for i in 1..8 {
        let ei = Octonion::basis(i);
        units = units.max((ei * ei + Octonion::ONE).norm());
        for j in (i + 1)..8 {
            let ej = Octonion::basis(j);
            units = units.max((ei * ej + ej * ei).norm());
        }
    }
    let e123 = associator(&Octonion::basis(1), &Octonion::basis(2), &Octonion::basis(3)).value;

    let mut report = RunReport::new("algebra", seed);
    report.param("trials", trials);
    report.param("component_bound", COMPONENT_BOUND);
    report.param("sampling", "uniform in [-10,10]^8 restricted to |a| <= 10");
    let rows = [
        ("moufang", moufang.0, IDENTITY_TOL),
        ("flexibility", flexible.0, IDENTITY_TOL),
        ("conjugate_pair", pair.0, IDENTITY_TOL),
        ("conjugate_pair_mirror", pair_mirror.0, IDENTITY_TOL),
        ("conj_b_times_b_is_norm_sqr", bb_real.0, IDENTITY_TOL),
        ("scalar_real_identity", scalar_real.0, IDENTITY_TOL),
        ("norm_composition_relative", composition.0, RELATIVE_TOL),
        ("conjugation_anti_automorphism", anti.0, IDENTITY_TOL),
        ("alternativity_left", alt_left.0, IDENTITY_TOL),
        ("alternativity_right", alt_right.0, IDENTITY_TOL),
        ("table_vs_cayley_dickson", table_cd.0, MULTIPLICATION_TOL),
        ("inverse_relative", inverse.0, RELATIVE_TOL),
    ];
    for (name, residual, tol) in rows {
        report.push(CheckRow::check(name, residual, residual, tol).target(0.0));
    }
    report.push(CheckRow::check("unit_anticommutation", units, units, 0.0).target(0.0));
    let target = Octonion::basis(7).scale(2.0);
    report.push(CheckRow::check("associator_e1_e2_e3", e123, (e123 - target).norm(), 0.0).target(target));
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_trial_is_a_valid_report() {
        let r = run_algebra_suite(1, 0).unwrap();
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(r.params["trials"], 1);
    }

    #[test]
    fn zero_trials_is_a_usage_error() {
        assert!(matches!(run_algebra_suite(0, 0), Err(CliError::Usage(_))));
    }

    #[test]
    fn samples_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let o = random_octonion(&mut rng);
            assert!(o.norm() <= 10.0 && o.max_abs() <= 10.0);
        }
    }
}
