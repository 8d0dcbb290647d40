use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use bell_core::lhv::{
    combination, quantum_chsh, quantum_correlation, sign_model_correlation, tsirelson_settings,
};
use bell_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn quadruple(r: &mut ChaCha8Rng) -> [UnitVector; 4] {
    [(); 4].map(|_| UnitVector::random(r))
}

fn unit() -> impl Strategy<Value = UnitVector> {
    (0.0..PI, 0.0..2.0 * PI).prop_map(|(t, p)| UnitVector::from_polar(t, p))
}

proptest! {
    #[test]
    fn per_draw_combination_is_plus_minus_two(
        a in unit(), ap in unit(), b in unit(), bp in unit(), l in unit(), shift in -0.9..0.9f64,
    ) {
        let s = [a, ap, b, bp];
        prop_assert_eq!(i32::from(combination(&SignModel, &s, &l)).abs(), 2);
        let m = ShiftedSignModel::new(shift).unwrap();
        prop_assert_eq!(i32::from(combination(&m, &s, &l)).abs(), 2);
    }

    #[test]
    fn identical_settings_anticorrelate(a in unit(), seed in any::<u64>()) {
        prop_assert_eq!(estimate_e(&SignModel, &a, &a, 2000, seed).unwrap().mean, -1.0);
    }
}

#[test]
fn chsh_within_classical_bound_for_both_models() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let shifted = ShiftedSignModel::new(0.35).unwrap();
    let models: [&dyn LhvModel; 2] = [&SignModel, &shifted];
    for k in 0..50 {
        let s = quadruple(&mut r);
        for m in models {
            let c = chsh_lhv(m, &s, 200_000, k).unwrap();
            assert_eq!(c.square_defects, 0);
            assert!(c.estimate.mean.abs() <= 2.0 + 5.0 * c.estimate.std_error);
        }
    }
}

#[test]
fn sign_model_matches_analytic_correlation() {
    let a = UnitVector::from_polar(0.0, 0.0);
    for theta in [0.1, FRAC_PI_4, 1.2, 2.0, 3.0] {
        let b = UnitVector::from_polar(theta, 0.0);
        let e = estimate_e(&SignModel, &a, &b, 400_000, 8).unwrap();
        assert!(
            (e.mean - sign_model_correlation(theta)).abs() <= 4.0 * e.std_error,
            "θ = {theta}"
        );
    }
}

#[test]
fn quantum_exceeds_model_at_quarter_turn() {
    let s = tsirelson_settings();
    assert!((quantum_chsh(&s).abs() - 2.0 * SQRT_2).abs() < 1e-14);
    let gap = sign_model_correlation(FRAC_PI_4) - quantum_correlation(&s[0], &s[2]);
    assert!((gap - (FRAC_PI_4.cos() - 0.5)).abs() < 1e-14);
    let c = chsh_lhv(&SignModel, &s, 400_000, 3).unwrap();
    assert!(c.estimate.mean.abs() <= 2.0 + 5.0 * c.estimate.std_error);
    assert!(c.estimate.mean.abs() < quantum_chsh(&s).abs() - 0.5);
}

#[test]
fn seeded_runs_are_reproducible() {
    let s = tsirelson_settings();
    let x = chsh_lhv(&SignModel, &s, 100_000, 42).unwrap();
    let y = chsh_lhv(&SignModel, &s, 100_000, 42).unwrap();
    assert_eq!(x, y);
    assert!(chsh_lhv(&SignModel, &s, 0, 42).is_err());
    assert!(ShiftedSignModel::new(1.0).is_err());
}
