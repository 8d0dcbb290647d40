//! Constructors for every state family, plus the bipartite product test.
//!
//! Qubit basis index 0 is `|+⟩` (spin up), index 1 is `|−⟩`. Spin-`j` basis
//! index `k` carries `m = j − k`. Fock modes are truncated to a [`FockCutoff`]
//! and every truncated state is renormalized on the working space.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::scalar::{cr, phase, Real};
use crate::spin::Spin;
use crate::tensor::StateVector;

/// Largest norm a coherent or entangled-coherent state may lose to truncation.
pub const COHERENT_TAIL_LIMIT: f64 = 1e-10;
/// Largest norm a two-mode squeezed state may lose to truncation.
pub const SQUEEZED_TAIL_LIMIT: f64 = 1e-12;
/// Schmidt coefficients above this count towards the Schmidt rank.
pub const SCHMIDT_TOL: f64 = 1e-10;

/// Number of retained Fock levels `0..n_max`, always even so that every
/// `(2n, 2n+1)` pair is complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockCutoff(usize);

impl FockCutoff {
    pub const DEFAULT_LEVELS: usize = 40;

    pub fn new(levels: usize) -> Result<Self> {
        if levels == 0 || !levels.is_multiple_of(2) {
            return Err(invalid(
                "cutoff",
                format!("{levels} is not a positive even level count"),
            ));
        }
        Ok(Self(levels))
    }

    pub fn levels(self) -> usize {
        self.0
    }
}

impl Default for FockCutoff {
    fn default() -> Self {
        Self(Self::DEFAULT_LEVELS)
    }
}

/// Index `α ∈ {0, 1, 2, 3}` of a Bell state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BellIndex(u8);

impl BellIndex {
    pub const ALL: [BellIndex; 4] = [BellIndex(0), BellIndex(1), BellIndex(2), BellIndex(3)];

    pub fn new(alpha: u8) -> Result<Self> {
        if alpha > 3 {
            return Err(invalid(
                "alpha",
                format!("Bell index {alpha} outside 0..=3"),
            ));
        }
        Ok(Self(alpha))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// `φ0 = (|++⟩+|−−⟩)/√2`, `φ1 = (|++⟩−|−−⟩)/√2`,
/// `φ2 = (|+−⟩−|−+⟩)/√2` (singlet), `φ3 = (|+−⟩+|−+⟩)/√2`.
pub fn bell_state<T: Real>(alpha: BellIndex) -> StateVector<T> {
    let one = T::one();
    let zero = T::zero();
    let amps = match alpha.0 {
        0 => [one, zero, zero, one],
        1 => [one, zero, zero, -one],
        2 => [zero, one, -one, zero],
        _ => [zero, one, one, zero],
    };
    StateVector::from_real(&amps, vec![2, 2]).expect("Bell state is well formed")
}

/// `(|++⟩ + |+−⟩ + |−+⟩ + √(N−3)|−−⟩)/√N`; entangled for `N ≥ 5`, a product at `N = 4`.
pub fn gisin_family_state<T: Real>(n: u64) -> Result<StateVector<T>> {
    if n < 3 {
        return Err(invalid("N", format!("N = {n} must be at least 3")));
    }
    let nf = T::from_u64(n).ok_or_else(|| invalid("N", "not representable"))?;
    let last = (nf - T::lit(3.0)).sqrt();
    let s = nf.sqrt();
    let amps = [T::one() / s, T::one() / s, T::one() / s, last / s];
    StateVector::from_real(&amps, vec![2, 2])
}

/// `(|+−⟩ + r|−+⟩)/√(1+r²)`
pub fn r_state<T: Real>(r: T) -> Result<StateVector<T>> {
    if !r.is_finite() {
        return Err(invalid("r", "must be finite"));
    }
    StateVector::from_real(&[T::zero(), T::one(), r, T::zero()], vec![2, 2])
}

/// Spin-`j` singlet `Σ_m (−1)^{j−m} |m⟩⊗|−m⟩ / √(2j+1)`.
pub fn spin_singlet<T: Real>(j: Spin) -> StateVector<T> {
    let d = j.dim();
    let mut amps = vec![cr(T::zero()); d * d];
    let norm = T::lit(d as f64).sqrt();
    for k in 0..d {
        // |m⟩ at index k pairs with |−m⟩ at index d−1−k; (−1)^{j−m} = (−1)^k.
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        amps[k * d + (d - 1 - k)] = cr(sign / norm);
    }
    StateVector::new(amps, vec![d, d]).expect("singlet is normalized")
}

/// `(|+…+⟩ − |−…−⟩)/√2` on `n` qubits.
pub fn ghz_state<T: Real>(parties: usize) -> Result<StateVector<T>> {
    if parties < 3 {
        return Err(invalid(
            "parties",
            format!("GHZ needs at least 3 parties, got {parties}"),
        ));
    }
    if parties > 20 {
        return Err(invalid(
            "parties",
            format!("{parties} parties exceeds dense storage"),
        ));
    }
    let dim = 1usize << parties;
    let mut amps = vec![T::zero(); dim];
    amps[0] = T::one();
    amps[dim - 1] = -T::one();
    StateVector::from_real(&amps, vec![2; parties])
}

/// Truncated coherent-state amplitudes `e^{−|z|²/2} zⁿ/√(n!)` (not renormalized).
///
/// Fails when the discarded tail carries more than [`COHERENT_TAIL_LIMIT`].
pub fn coherent_amplitudes<T: Real>(z: Complex<T>, cutoff: FockCutoff) -> Result<Vec<Complex<T>>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(invalid("z", "must be finite"));
    }
    let levels = cutoff.levels();
    let r2 = z.norm_sqr();
    let mut amp = cr((-r2 / T::lit(2.0)).exp());
    let mut out = Vec::with_capacity(levels);
    for n in 0..levels {
        if n > 0 {
            amp = amp * z / T::lit(n as f64).sqrt();
        }
        out.push(amp);
    }
    let leak = coherent_tail(z.norm().as_f64(), levels);
    if leak > COHERENT_TAIL_LIMIT {
        return Err(Error::TruncationTail {
            leak,
            cutoff: levels,
            limit: COHERENT_TAIL_LIMIT,
        });
    }
    Ok(out)
}

/// Poisson tail `e^{−r²} Σ_{n ≥ levels} r^{2n}/n!`, summed directly.
fn coherent_tail(r: f64, levels: usize) -> f64 {
    let r2 = r * r;
    // log of the first discarded term, then a forward recursion.
    let mut log_term =
        -r2 + (levels as f64) * r2.max(f64::MIN_POSITIVE).ln() - ln_factorial(levels);
    if r2 == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut n = levels;
    loop {
        let term = log_term.exp();
        sum += term;
        n += 1;
        log_term += r2.ln() - (n as f64).ln();
        if (n as f64) > r2 && (term < 1e-40 || term < sum * 1e-18) {
            break;
        }
        if n > levels + 100_000 {
            break;
        }
    }
    sum
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Coherent state `|z⟩`, renormalized on the truncated space.
pub fn coherent_state<T: Real>(z: Complex<T>, cutoff: FockCutoff) -> Result<StateVector<T>> {
    let amps = coherent_amplitudes(z, cutoff)?;
    StateVector::normalized(amps, vec![cutoff.levels()])
}

/// `𝒩 = (1/√2)(1 + cos φ e^{−2(η²+σ²)})^{−1/2}`
pub fn entangled_coherent_norm<T: Real>(eta: T, sigma: T, phi: T) -> Result<T> {
    let overlap = phi.cos() * (-T::lit(2.0) * (eta * eta + sigma * sigma)).exp();
    let base = T::one() + overlap;
    if base <= T::epsilon() {
        return Err(Error::ZeroVector(format!(
            "entangled coherent state vanishes (η = {eta}, σ = {sigma}, φ = {phi})"
        )));
    }
    Ok(T::one() / (T::lit(2.0) * base).sqrt())
}

/// `𝒩[|η⟩⊗|σ⟩ + e^{iφ}|−η⟩⊗|−σ⟩]` on two truncated modes.
pub fn entangled_coherent<T: Real>(
    eta: T,
    sigma: T,
    phi: T,
    cutoff: FockCutoff,
) -> Result<StateVector<T>> {
    check_finite_params(&[("eta", eta), ("sigma", sigma), ("phi", phi)])?;
    let norm = entangled_coherent_norm(eta, sigma, phi)?;
    let amps = two_mode_superposition(
        (cr(eta), cr(sigma)),
        (cr(-eta), cr(-sigma)),
        phase(phi),
        cutoff,
    )?;
    let levels = cutoff.levels();
    StateVector::normalized(
        amps.into_iter().map(|a| a * norm).collect(),
        vec![levels, levels],
    )
}

/// `𝒩s[|η⟩⊗|σ⟩ + e^{iφ}|σ⟩⊗|η⟩]`, normalized numerically.
pub fn symmetric_coherent<T: Real>(
    eta: T,
    sigma: T,
    phi: T,
    cutoff: FockCutoff,
) -> Result<StateVector<T>> {
    check_finite_params(&[("eta", eta), ("sigma", sigma), ("phi", phi)])?;
    let amps = two_mode_superposition(
        (cr(eta), cr(sigma)),
        (cr(sigma), cr(eta)),
        phase(phi),
        cutoff,
    )?;
    let levels = cutoff.levels();
    StateVector::normalized(amps, vec![levels, levels])
}

/// Parity of a single-mode cat state `|η⟩ ± |−η⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatParity {
    Even,
    Odd,
}

/// Single-mode cat `N±[|η⟩ ± |−η⟩]`, normalized numerically.
pub fn cat_state<T: Real>(eta: T, parity: CatParity, cutoff: FockCutoff) -> Result<StateVector<T>> {
    check_finite_params(&[("eta", eta)])?;
    let plus = coherent_amplitudes(cr(eta), cutoff)?;
    let minus = coherent_amplitudes(cr(-eta), cutoff)?;
    let sign = match parity {
        CatParity::Even => T::one(),
        CatParity::Odd => -T::one(),
    };
    let amps: Vec<_> = plus.iter().zip(&minus).map(|(a, b)| a + b * sign).collect();
    let norm = amps.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    if norm <= T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) {
        return Err(Error::ZeroVector(format!(
            "cat state |η⟩ ± |−η⟩ vanishes at η = {eta}"
        )));
    }
    StateVector::normalized(amps, vec![cutoff.levels()])
}

/// `C±[|η⟩±⊗|σ⟩± + e^{iφ}|σ⟩±⊗|η⟩±]` built from single-mode cats.
pub fn cat_state_pair<T: Real>(
    eta: T,
    sigma: T,
    phi: T,
    parity: CatParity,
    cutoff: FockCutoff,
) -> Result<StateVector<T>> {
    check_finite_params(&[("phi", phi)])?;
    let e = cat_state(eta, parity, cutoff)?;
    let s = cat_state(sigma, parity, cutoff)?;
    let ph = phase(phi);
    let levels = cutoff.levels();
    let mut amps = Vec::with_capacity(levels * levels);
    for n in 0..levels {
        for m in 0..levels {
            let a =
                e.amplitudes()[n] * s.amplitudes()[m] + ph * s.amplitudes()[n] * e.amplitudes()[m];
            amps.push(a);
        }
    }
    normalize_or_zero(amps, vec![levels, levels], "cat pair superposition")
}

/// Two-mode squeezed state `√(1−λ²) Σ λⁿ |n, n⟩`, renormalized after truncation.
pub fn squeezed_state<T: Real>(lambda: T, cutoff: FockCutoff) -> Result<StateVector<T>> {
    if !(lambda > T::zero() && lambda < T::one()) {
        return Err(invalid(
            "lambda",
            format!("{lambda} outside the open interval (0, 1)"),
        ));
    }
    let levels = cutoff.levels();
    let leak = lambda.as_f64().powi(2 * levels as i32);
    if leak >= SQUEEZED_TAIL_LIMIT {
        return Err(Error::TruncationTail {
            leak,
            cutoff: levels,
            limit: SQUEEZED_TAIL_LIMIT,
        });
    }
    let mut amps = vec![cr(T::zero()); levels * levels];
    let pre = (T::one() - lambda * lambda).sqrt();
    let mut pow = T::one();
    for n in 0..levels {
        amps[n * levels + n] = cr(pre * pow);
        pow *= lambda;
    }
    StateVector::normalized(amps, vec![levels, levels])
}

/// Outcome of the bipartite product test.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTest<T: Real> {
    pub is_product: bool,
    /// Schmidt coefficients (singular values of the coefficient matrix), descending.
    pub schmidt_coefficients: Vec<T>,
    /// `a₁a₄ − a₂a₃` for two-qubit states.
    pub determinant: Option<Complex<T>>,
}

impl<T: Real> ProductTest<T> {
    pub fn schmidt_rank(&self) -> usize {
        let tol = schmidt_tol::<T>();
        self.schmidt_coefficients
            .iter()
            .filter(|&&s| s > tol)
            .count()
    }
}

pub(crate) fn schmidt_tol<T: Real>() -> T {
    T::lit(SCHMIDT_TOL).max(T::epsilon() * T::lit(100.0))
}

/// Reshapes a bipartite state into its `dA × dB` coefficient matrix and
/// counts Schmidt coefficients; a product state has exactly one.
pub fn is_product<T: Real>(psi: &StateVector<T>) -> Result<ProductTest<T>> {
    let shape = psi.shape();
    if shape.len() != 2 {
        return Err(Error::NotBipartite(shape.to_vec()));
    }
    let (da, db) = (shape[0], shape[1]);
    let schmidt = linalg::singular_values(psi.amplitudes(), da, db)?;
    let determinant = (da == 2 && db == 2).then(|| {
        let a = psi.amplitudes();
        a[0] * a[3] - a[1] * a[2]
    });
    let tol = schmidt_tol::<T>();
    let rank = schmidt.iter().filter(|&&s| s > tol).count();
    Ok(ProductTest {
        is_product: rank == 1,
        schmidt_coefficients: schmidt,
        determinant,
    })
}

fn two_mode_superposition<T: Real>(
    first: (Complex<T>, Complex<T>),
    second: (Complex<T>, Complex<T>),
    weight: Complex<T>,
    cutoff: FockCutoff,
) -> Result<Vec<Complex<T>>> {
    let a1 = coherent_amplitudes(first.0, cutoff)?;
    let b1 = coherent_amplitudes(first.1, cutoff)?;
    let a2 = coherent_amplitudes(second.0, cutoff)?;
    let b2 = coherent_amplitudes(second.1, cutoff)?;
    let levels = cutoff.levels();
    let mut amps = Vec::with_capacity(levels * levels);
    for n in 0..levels {
        for m in 0..levels {
            amps.push(a1[n] * b1[m] + weight * a2[n] * b2[m]);
        }
    }
    let norm = amps.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    if norm <= T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) {
        return Err(Error::ZeroVector(
            "two-mode coherent superposition cancels exactly".into(),
        ));
    }
    Ok(amps)
}

fn normalize_or_zero<T: Real>(
    amps: Vec<Complex<T>>,
    shape: Vec<usize>,
    what: &str,
) -> Result<StateVector<T>> {
    let norm = amps.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
    if norm <= T::lit(1e-12).max(T::epsilon() * T::lit(16.0)) {
        return Err(Error::ZeroVector(format!("{what} cancels exactly")));
    }
    StateVector::normalized(amps, shape)
}

fn check_finite_params<T: Real>(params: &[(&'static str, T)]) -> Result<()> {
    for &(name, v) in params {
        if !v.is_finite() {
            return Err(invalid(name, "must be finite"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{annihilation, spin_matrices};
    use crate::tensor::{tensor_op, DenseOperator};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn re(v: &StateVector<f64>) -> Vec<f64> {
        v.amplitudes().iter().map(|z| z.re).collect()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn bell_phi0_and_orthonormality() {
        let phi0 = bell_state::<f64>(BellIndex::new(0).unwrap());
        assert!(close(
            &re(&phi0),
            &[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
            1e-15
        ));
        for a in BellIndex::ALL {
            for b in BellIndex::ALL {
                let ip = bell_state::<f64>(a).inner(&bell_state(b)).unwrap();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
        assert!(BellIndex::new(4).is_err());
    }

    #[test]
    fn singlet_has_zero_total_spin() {
        let phi2 = bell_state::<f64>(BellIndex::new(2).unwrap());
        let ops = spin_matrices::<f64>(Spin::HALF);
        let id = DenseOperator::identity(2);
        for s in &ops {
            let total = &tensor_op(s, &id) + &tensor_op(&id, s);
            let out = total.apply(phi2.amplitudes()).unwrap();
            assert!(out.iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn gisin_examples() {
        let s3 = gisin_family_state::<f64>(3).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!(close(&re(&s3), &[r, r, r, 0.0], 1e-15));
        assert!(close(
            &re(&gisin_family_state::<f64>(4).unwrap()),
            &[0.5; 4],
            1e-15
        ));
        let r7 = 1.0 / 7f64.sqrt();
        assert!(close(
            &re(&gisin_family_state::<f64>(7).unwrap()),
            &[r7, r7, r7, 2.0 * r7],
            1e-15
        ));
        assert!(gisin_family_state::<f64>(2).is_err());
    }

    #[test]
    fn r_state_examples() {
        assert!(close(
            &re(&r_state(0.0).unwrap()),
            &[0.0, 1.0, 0.0, 0.0],
            1e-15
        ));
        let phi3 = bell_state::<f64>(BellIndex::new(3).unwrap());
        assert!(close(&re(&r_state(1.0).unwrap()), &re(&phi3), 1e-15));
        let n = 1.25f64.sqrt();
        assert!(close(
            &re(&r_state(0.5).unwrap()),
            &[0.0, 1.0 / n, 0.5 / n, 0.0],
            1e-15
        ));
        assert!(r_state(f64::NAN).is_err());
    }

    #[test]
    fn singlet_examples() {
        let half = spin_singlet::<f64>(Spin::HALF);
        let phi2 = bell_state::<f64>(BellIndex::new(2).unwrap());
        assert!(close(&re(&half), &re(&phi2), 1e-15));
        let one = spin_singlet::<f64>(Spin::ONE);
        let r = 1.0 / 3f64.sqrt();
        // |1,−1⟩ at 0·3+2, |0,0⟩ at 4, |−1,1⟩ at 6.
        let mut want = vec![0.0; 9];
        want[2] = r;
        want[4] = -r;
        want[6] = r;
        assert!(close(&re(&one), &want, 1e-15));
        let three = spin_singlet::<f64>(Spin::THREE_HALVES);
        let mut want = vec![0.0; 16];
        want[3] = 0.5;
        want[6] = -0.5;
        want[9] = 0.5;
        want[12] = -0.5;
        assert!(close(&re(&three), &want, 1e-15));
    }

    #[test]
    fn singlets_are_spin_zero_for_j_up_to_four() {
        for twice in 1..=8 {
            let j = Spin::from_twice(twice).unwrap();
            let psi = spin_singlet::<f64>(j);
            let id = DenseOperator::identity(j.dim());
            for s in &spin_matrices::<f64>(j) {
                let total = &tensor_op(s, &id) + &tensor_op(&id, s);
                let out = total.apply(psi.amplitudes()).unwrap();
                let norm = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert!(norm < 1e-10, "j = {j}: {norm}");
            }
        }
    }

    #[test]
    fn ghz_examples() {
        let g = ghz_state::<f64>(3).unwrap();
        assert_eq!(g.shape(), &[2, 2, 2]);
        assert!((g.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((g.amplitudes()[7].re + FRAC_1_SQRT_2).abs() < 1e-15);
        let g4 = ghz_state::<f64>(4).unwrap();
        assert_eq!(g4.dim(), 16);
        assert!((g4.amplitudes()[15].re + FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(ghz_state::<f64>(2).is_err());
    }

    #[test]
    fn coherent_vacuum_and_eigen_relation() {
        let cut = FockCutoff::default();
        let vac = coherent_state(Complex64::new(0.0, 0.0), cut).unwrap();
        assert_eq!(vac.amplitudes()[0], Complex64::new(1.0, 0.0));
        let a = annihilation::<f64>(cut);
        for &(x, y) in &[
            (0.3, -0.2),
            (1.0, 1.0),
            (-1.5, 0.7),
            (0.0, 2.0),
            (1.2, -1.6),
        ] {
            let z = Complex64::new(x, y);
            let psi = coherent_state(z, cut).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-12);
            let apsi = a.apply(psi.amplitudes()).unwrap();
            let err = apsi
                .iter()
                .zip(psi.amplitudes())
                .map(|(l, r)| (l - z * r).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < 1e-8, "z = {z}: {err}");
        }
    }

    #[test]
    fn coherent_tail_guard() {
        let err = coherent_state(Complex64::new(5.0, 0.0), FockCutoff::default()).unwrap_err();
        assert!(matches!(err, Error::TruncationTail { .. }));
        assert!(coherent_state(Complex64::new(5.0, 0.0), FockCutoff::new(120).unwrap()).is_ok());
        assert!(FockCutoff::new(41).is_err());
        assert!(FockCutoff::new(0).is_err());
    }

    #[test]
    fn entangled_coherent_examples() {
        let cut = FockCutoff::default();
        let vac = entangled_coherent(0.0f64, 0.0, 0.0, cut).unwrap();
        assert!((vac.amplitudes()[0].re - 1.0).abs() < 1e-15);
        assert!(entangled_coherent(0.0, 0.0, std::f64::consts::PI, cut).is_err());
        for &(eta, sigma, phi) in &[
            (0.1, 0.1, std::f64::consts::PI),
            (1.0, 0.5, 0.3),
            (0.7, 0.7, 0.0),
        ] {
            // Direct inner product of the unnormalized superposition against the
            // analytic normalization factor.
            let raw = two_mode_superposition(
                (Complex64::new(eta, 0.0), Complex64::new(sigma, 0.0)),
                (Complex64::new(-eta, 0.0), Complex64::new(-sigma, 0.0)),
                Complex64::from_polar(1.0, phi),
                cut,
            )
            .unwrap();
            let norm_sqr: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
            let n = entangled_coherent_norm(eta, sigma, phi).unwrap();
            assert!((n * n * norm_sqr - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn symmetric_and_cat_examples() {
        let cut = FockCutoff::default();
        let err = cat_state(0.0, CatParity::Odd, cut).unwrap_err();
        assert!(matches!(err, Error::ZeroVector(_)));
        assert!(cat_state_pair(0.0, 0.5, 0.1, CatParity::Odd, cut).is_err());

        // η = σ: proportional to |η⟩⊗|η⟩, a product state.
        let s = symmetric_coherent(0.8, 0.8, 0.4, cut).unwrap();
        assert!(is_product(&s).unwrap().is_product);
        let coh = coherent_state(Complex64::new(0.8, 0.0), cut).unwrap();
        let prod = crate::tensor::tensor_state(&coh, &coh);
        assert!((s.inner(&prod).unwrap().norm() - 1.0).abs() < 1e-12);

        let sym = symmetric_coherent(1.0, 0.5, std::f64::consts::FRAC_PI_3, cut).unwrap();
        assert!((sym.norm() - 1.0).abs() < 1e-12);
        // Analytic normalization for real η, σ: 𝒩s⁻² = 2 + 2 cos φ e^{−(η−σ)²}.
        let raw = two_mode_superposition(
            (Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)),
            (Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0)),
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
            cut,
        )
        .unwrap();
        let norm_sqr: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
        let want = 2.0 + 2.0 * (std::f64::consts::FRAC_PI_3).cos() * (-0.25f64).exp();
        assert!((norm_sqr - want).abs() < 1e-10);

        for parity in [CatParity::Even, CatParity::Odd] {
            let pair = cat_state_pair(1.0f64, 0.5, 0.3, parity, cut).unwrap();
            assert!((pair.norm() - 1.0).abs() < 1e-12);
        }
        // Odd cat has only odd Fock components.
        let odd = cat_state(1.0, CatParity::Odd, cut).unwrap();
        assert!(odd.amplitudes().iter().step_by(2).all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn squeezed_examples() {
        let cut = FockCutoff::default();
        let tiny = squeezed_state(1e-9f64, cut).unwrap();
        assert!((tiny.amplitudes()[0].re - 1.0).abs() < 1e-15);
        let s = squeezed_state(0.5f64, cut).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!((s.amplitudes()[0].re - 0.75f64.sqrt()).abs() < 1e-12);
        assert!(squeezed_state(0.0, cut).is_err());
        assert!(squeezed_state(1.0, cut).is_err());
        assert!(matches!(
            squeezed_state(0.9, cut),
            Err(Error::TruncationTail { .. })
        ));
        assert!(squeezed_state(0.9, FockCutoff::new(140).unwrap()).is_ok());
    }

    #[test]
    fn product_test_examples() {
        let pm = StateVector::<f64>::basis(1, vec![2, 2]).unwrap();
        assert!(is_product(&pm).unwrap().is_product);
        let phi0 = bell_state::<f64>(BellIndex::new(0).unwrap());
        let t = is_product(&phi0).unwrap();
        assert!(!t.is_product);
        assert!((t.determinant.unwrap() - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(
            is_product(&gisin_family_state::<f64>(4).unwrap())
                .unwrap()
                .is_product
        );
        for n in 5..60 {
            assert!(
                !is_product(&gisin_family_state::<f64>(n).unwrap())
                    .unwrap()
                    .is_product
            );
        }
        // N = 3 is entangled as well: det = −1/3.
        assert!(
            !is_product(&gisin_family_state::<f64>(3).unwrap())
                .unwrap()
                .is_product
        );
        let g = ghz_state::<f64>(3).unwrap();
        assert!(matches!(is_product(&g), Err(Error::NotBipartite(_))));
    }
}
