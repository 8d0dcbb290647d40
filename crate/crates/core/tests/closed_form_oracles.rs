//! Closed-form correlators against the matrix route on constructed states.

use std::f64::consts::{PI, TAU};

use bell_core::correlators::{correlator_ghz, correlator_spin_j};
use bell_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DRAWS: usize = 200;

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xB311 ^ tag)
}

fn angle(r: &mut ChaCha8Rng) -> f64 {
    r.random_range(-TAU..TAU)
}

fn polar_draw(r: &mut ChaCha8Rng) -> PolarSetting<f64> {
    PolarSetting::new(r.random_range(0.0..PI), angle(r)).unwrap()
}

fn phase_op(a: f64, scheme: &PairingScheme) -> DenseOperatorF64 {
    phase_flip_observable(PhaseSetting::new(a).unwrap(), scheme)
}

fn matrix_chsh(psi: &StateVectorF64, ops: [&DenseOperatorF64; 4]) -> f64 {
    let c = chsh_operator(ops[0], ops[1], ops[2], ops[3]).unwrap();
    let v = expectation(&c, psi).unwrap();
    assert!(v.im.abs() < 1e-10);
    v.re
}

#[test]
fn phi0_phase_formula() {
    let mut r = rng(1);
    let q = PairingScheme::qubit();
    let phi0 = bell_state(BellIndex::new(0).unwrap());
    for _ in 0..DRAWS {
        let x: [f64; 4] = [(); 4].map(|_| angle(&mut r));
        let ops = x.map(|a| phase_op(a, &q));
        let m = matrix_chsh(&phi0, [&ops[0], &ops[1], &ops[2], &ops[3]]);
        assert!((chsh_phi0_phase(x) - m).abs() < 1e-12);
    }
}

#[test]
fn phi0_polar_formula() {
    let mut r = rng(2);
    let phi0 = bell_state(BellIndex::new(0).unwrap());
    for _ in 0..DRAWS {
        let s: [PolarSetting<f64>; 4] = [(); 4].map(|_| polar_draw(&mut r));
        let ops = s.map(polar_observable);
        let m = matrix_chsh(&phi0, [&ops[0], &ops[1], &ops[2], &ops[3]]);
        assert!((chsh_phi0_polar(s) - m).abs() < 1e-12);
    }
}

#[test]
fn gisin_formula() {
    let mut r = rng(3);
    for _ in 0..DRAWS {
        let n = r.random_range(3..5000u64);
        let psi = gisin_family_state(n).unwrap();
        let s: [PolarSetting<f64>; 4] = [(); 4].map(|_| polar_draw(&mut r));
        let ops = s.map(polar_observable);
        let m = matrix_chsh(&psi, [&ops[0], &ops[1], &ops[2], &ops[3]]);
        assert!((chsh_gisin(n, s).unwrap() - m).abs() < 1e-12, "N = {n}");
    }
}

#[test]
fn two_qubit_formula_on_r_states() {
    let mut r = rng(4);
    for _ in 0..DRAWS {
        let rr = r.random_range(-3.0..3.0);
        let psi = r_state(rr).unwrap();
        let amps: [C64; 4] = psi.amplitudes().try_into().unwrap();
        let s: [PolarSetting<f64>; 4] = [(); 4].map(|_| polar_draw(&mut r));
        let ops = s.map(polar_observable);
        let m = matrix_chsh(&psi, [&ops[0], &ops[1], &ops[2], &ops[3]]);
        assert!((chsh_two_qubit(&amps, s) - m).abs() < 1e-12);
    }
}

#[test]
fn spin_j_formula() {
    let mut r = rng(5);
    for twice in 1..=6u32 {
        let j = Spin::from_twice(twice).unwrap();
        let scheme = PairingScheme::spin(j);
        let psi = spin_singlet(j);
        for _ in 0..DRAWS / 4 {
            let phases: [Vec<f64>; 4] =
                [(); 4].map(|_| (0..j.pair_count()).map(|_| angle(&mut r)).collect());
            let ops = phases.clone().map(|p| {
                let settings: Vec<_> = p.iter().map(|&a| PhaseSetting::new(a).unwrap()).collect();
                phase_flip_per_pair(&settings, &scheme).unwrap()
            });
            let m = matrix_chsh(&psi, [&ops[0], &ops[1], &ops[2], &ops[3]]);
            let closed = chsh_spin_j(j, [&phases[0], &phases[1], &phases[2], &phases[3]]).unwrap();
            assert!((closed - m).abs() < 1e-12, "j = {j}");

            let ab = tensor_op(&ops[0], &ops[2]);
            let e = expectation(&ab, &psi).unwrap().re;
            assert!((correlator_spin_j(j, &phases[0], &phases[2]).unwrap() - e).abs() < 1e-12);
        }
    }
    let x = [0.3, 1.4, -0.8, 2.0];
    let one = chsh_spin_j(Spin::ONE, [&x[..1], &x[1..2], &x[2..3], &x[3..]]).unwrap();
    assert_eq!(chsh_spin1(x), one);
}

fn fock_chsh_draw(
    r: &mut ChaCha8Rng,
    psi: &StateVectorF64,
    cut: FockCutoff,
    closed: impl Fn([f64; 4]) -> f64,
    tol: f64,
) {
    let scheme = PairingScheme::fock(cut);
    let x: [f64; 4] = [(); 4].map(|_| angle(r));
    let ops = x.map(|a| phase_op(a, &scheme));
    let m = matrix_chsh(psi, [&ops[0], &ops[1], &ops[2], &ops[3]]);
    let c = closed(x);
    assert!((c - m).abs() < tol, "{c} vs {m} at {x:?}");
}

// Bulk draws run at 24 levels, where the dense CHSH matrix is 576²; a few
// draws at the default 40 levels follow.
#[test]
fn coherent_formula() {
    let mut r = rng(6);
    for (levels, draws) in [(24, DRAWS), (40, 5)] {
        let cut = FockCutoff::new(levels).unwrap();
        for _ in 0..draws {
            let eta = r.random_range(-1.2..1.2);
            let sigma = r.random_range(-1.2..1.2);
            let phi = r.random_range(0.0..TAU);
            if coherent_omega(eta, sigma, phi).is_err() {
                continue;
            }
            let psi = entangled_coherent(eta, sigma, phi, cut).unwrap();
            fock_chsh_draw(
                &mut r,
                &psi,
                cut,
                |x| chsh_coherent(eta, sigma, phi, x).unwrap(),
                1e-5,
            );
        }
    }
}

#[test]
fn squeezed_formula() {
    let mut r = rng(7);
    for (levels, hi, draws) in [(24, 0.5, DRAWS), (40, 0.7, 5)] {
        let cut = FockCutoff::new(levels).unwrap();
        for _ in 0..draws {
            let lambda = r.random_range(0.01..hi);
            let psi = squeezed_state(lambda, cut).unwrap();
            fock_chsh_draw(
                &mut r,
                &psi,
                cut,
                |x| chsh_squeezed(lambda, x).unwrap(),
                1e-8,
            );
        }
    }
}

#[test]
fn ghz_formulas() {
    let mut r = rng(8);
    let q = PairingScheme::qubit();
    let ghz3 = ghz_state(3).unwrap();
    let ghz4 = ghz_state(4).unwrap();
    for _ in 0..DRAWS {
        let x: [f64; 8] = [(); 8].map(|_| angle(&mut r));
        let ops = x.map(|a| phase_op(a, &q));

        let m3 =
            mermin3_operator([[&ops[0], &ops[1]], [&ops[2], &ops[3]], [&ops[4], &ops[5]]]).unwrap();
        let v3 = expectation(&m3, &ghz3).unwrap().re;
        assert!((mermin3_ghz([x[0], x[1], x[2], x[3], x[4], x[5]]) - v3).abs() < 1e-12);

        let m4 = mermin4_operator([
            [&ops[0], &ops[1]],
            [&ops[2], &ops[3]],
            [&ops[4], &ops[5]],
            [&ops[6], &ops[7]],
        ])
        .unwrap();
        let v4 = expectation(&m4, &ghz4).unwrap().re;
        assert!((mermin4_ghz(x) - v4).abs() < 1e-12);

        let abc = tensor_ops(&[&ops[0], &ops[2], &ops[4]]);
        let e = expectation(&abc, &ghz3).unwrap().re;
        assert!((correlator_ghz(&[x[0], x[2], x[4]]) - e).abs() < 1e-12);
    }
}

#[test]
fn generic_correlator_reports() {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
    let q = PairingScheme::qubit();
    let x = [0.0, FRAC_PI_2, -FRAC_PI_4, FRAC_PI_4];
    let ops = x.map(|a| phase_op(a, &q));
    let c = chsh_operator(&ops[0], &ops[1], &ops[2], &ops[3]).unwrap();
    let phi0 = bell_state(BellIndex::new(0).unwrap());
    let rep = generic_correlator(&phi0, &c, Inequality::Chsh, AngleSet::phases(&x)).unwrap();
    assert!((rep.value - 2.0 * SQRT_2).abs() < 1e-12);
    assert!(rep.violated);
    assert_eq!(rep.quantum_bound, 2.0 * SQRT_2);

    let prod = StateVector::<f64>::basis(1, vec![2, 2]).unwrap();
    let mut r = rng(9);
    for _ in 0..50 {
        let s: [PolarSetting<f64>; 4] = [(); 4].map(|_| polar_draw(&mut r));
        let ops = s.map(polar_observable);
        let c = chsh_operator(&ops[0], &ops[1], &ops[2], &ops[3]).unwrap();
        let rep = generic_correlator(&prod, &c, Inequality::Chsh, AngleSet::polar(&s)).unwrap();
        assert!(rep.value.abs() <= 2.0 + 1e-12);
        assert!(!rep.violated);
    }

    let ghz3 = ghz_state::<f64>(3).unwrap();
    assert!(generic_correlator(&ghz3, &c, Inequality::Chsh, AngleSet::phases(&x)).is_err());
}

#[test]
fn single_precision_agrees() {
    use std::f32::consts::{FRAC_PI_2, FRAC_PI_4};
    let q = PairingScheme::qubit();
    let x: [f32; 4] = [0.0, FRAC_PI_2, -FRAC_PI_4, FRAC_PI_4];
    let ops = x.map(|a| phase_flip_observable(PhaseSetting::new(a).unwrap(), &q));
    let c = chsh_operator(&ops[0], &ops[1], &ops[2], &ops[3]).unwrap();
    let phi0 = bell_state::<f32>(BellIndex::new(0).unwrap());
    let v = expectation(&c, &phi0).unwrap().re;
    assert!((v - chsh_phi0_phase(x)).abs() < 1e-5);
    assert!((operator_norm(&c).unwrap() - 2.0 * std::f32::consts::SQRT_2).abs() < 1e-4);
}
