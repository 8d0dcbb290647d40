//! Closed-form Bell-CHSH and Mermin correlators, plus the generic matrix route.
//!
//! Every closed form here has a matrix counterpart: build the state from
//! [`crate::states`], the operator from [`crate::observables`], and call
//! [`generic_correlator`]. The integration tests hold the two routes together.
//!
//! Angle arrays follow one convention throughout: CHSH takes `(α, α′, β, β′)`,
//! Mermin takes `(α, α′, β, β′, γ, γ′[, δ, δ′])`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::observables::{mermin4_sign, PolarSetting};
use crate::scalar::Real;
use crate::spin::Spin;
use crate::tensor::{expectation, DenseOperator, StateVector};

/// Maximum order `n` (and `m`) kept in the coherent-state series.
pub const COHERENT_SERIES_MAX: usize = 60;
/// Relative size of a series term below which summation stops.
pub const COHERENT_SERIES_EPS: f64 = 1e-15;

/// `E(A,B) + E(A′,B) + E(A,B′) − E(A′,B′)` from a two-party correlator.
pub fn chsh_combination<T: Real>(mut e: impl FnMut(usize, usize) -> T) -> T {
    e(0, 0) + e(1, 0) + e(0, 1) - e(1, 1)
}

/// `⟨φ₀|A⊗B|φ₀⟩ = cos(α + β)` for phase-flip observables.
pub fn correlator_phi0_phase<T: Real>(alpha: T, beta: T) -> T {
    (alpha + beta).cos()
}

pub fn chsh_phi0_phase<T: Real>(angles: [T; 4]) -> T {
    let [a, ap, b, bp] = angles;
    chsh_combination(|i, j| correlator_phi0_phase([a, ap][i], [b, bp][j]))
}

/// `⟨φ₀|A⊗B|φ₀⟩ = cos θ cos ω + sin θ sin ω cos(α + β)` for polar observables.
pub fn correlator_phi0_polar<T: Real>(a: PolarSetting<T>, b: PolarSetting<T>) -> T {
    let (st, ct) = a.theta().sin_cos();
    let (sw, cw) = b.theta().sin_cos();
    ct * cw + st * sw * (a.alpha() + b.alpha()).cos()
}

/// Settings ordered `(A, A′, B, B′)`.
pub fn chsh_phi0_polar<T: Real>(s: [PolarSetting<T>; 4]) -> T {
    chsh_combination(|i, j| correlator_phi0_polar(s[i], s[2 + j]))
}

fn check_gisin_n(n: u64) -> Result<()> {
    if n < 3 {
        return Err(invalid("N", format!("must be at least 3, got {n}")));
    }
    Ok(())
}

/// Correlator of polar observables in the state `(|++⟩ + |+−⟩ + |−+⟩ + √(N−3)|−−⟩)/√N`.
pub fn correlator_gisin<T: Real>(n: u64, a: PolarSetting<T>, b: PolarSetting<T>) -> Result<T> {
    check_gisin_n(n)?;
    let nn = T::lit(n as f64);
    let r = T::lit((n - 3) as f64).sqrt();
    let two = T::lit(2.0);
    let (st, ct) = a.theta().sin_cos();
    let (sw, cw) = b.theta().sin_cos();
    let (al, be) = (a.alpha(), b.alpha());
    let v = ct * cw * (nn - T::lit(4.0))
        + two * ct * sw * (T::one() - r) * be.cos()
        + two * st * cw * (T::one() - r) * al.cos()
        + two * st * sw * (r * (al + be).cos() + (al - be).cos());
    Ok(v / nn)
}

pub fn chsh_gisin<T: Real>(n: u64, s: [PolarSetting<T>; 4]) -> Result<T> {
    check_gisin_n(n)?;
    Ok(chsh_combination(|i, j| {
        correlator_gisin(n, s[i], s[2 + j]).expect("N checked above")
    }))
}

/// `⟨ψ|A⊗B|ψ⟩` for an arbitrary two-qubit pure state, amplitudes in the order
/// `|++⟩, |+−⟩, |−+⟩, |−−⟩`.
pub fn correlator_two_qubit<T: Real>(
    psi: &[Complex<T>; 4],
    a: PolarSetting<T>,
    b: PolarSetting<T>,
) -> T {
    let pa = polar_entries(a);
    let pb = polar_entries(b);
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    acc += psi[2 * i + j].conj() * pa[i][k] * pb[j][l] * psi[2 * k + l];
                }
            }
        }
    }
    acc.re
}

pub fn chsh_two_qubit<T: Real>(psi: &[Complex<T>; 4], s: [PolarSetting<T>; 4]) -> T {
    chsh_combination(|i, j| correlator_two_qubit(psi, s[i], s[2 + j]))
}

fn polar_entries<T: Real>(s: PolarSetting<T>) -> [[Complex<T>; 2]; 2] {
    let (st, ct) = s.theta().sin_cos();
    let e = Complex::from_polar(T::one(), s.alpha());
    [
        [Complex::new(ct, T::zero()), e.conj() * st],
        [e * st, Complex::new(-ct, T::zero())],
    ]
}

/// `⟨ψ_j|A⊗B|ψ_j⟩` for the spin-`j` singlet with one phase per `(m, −m)` pair:
/// `[δ + (−1)^{2j} Σ_k 2 cos(α_k − β_k)] / (2j+1)`, with `δ = 1` for integer `j`.
pub fn correlator_spin_j<T: Real>(j: Spin, alphas: &[T], betas: &[T]) -> Result<T> {
    let pairs = j.pair_count();
    for (name, v) in [("alphas", alphas), ("betas", betas)] {
        if v.len() != pairs {
            return Err(invalid(
                name,
                format!("spin {j} needs {pairs} phases, got {}", v.len()),
            ));
        }
    }
    let sign = if j.is_integer() { T::one() } else { -T::one() };
    let fixed = if j.is_integer() { T::one() } else { T::zero() };
    let two = T::lit(2.0);
    let sum = alphas
        .iter()
        .zip(betas)
        .fold(T::zero(), |s, (&a, &b)| s + two * (a - b).cos());
    Ok((fixed + sign * sum) / T::lit(j.dim() as f64))
}

/// Per-pair phases for `(A, A′, B, B′)`.
pub fn chsh_spin_j<T: Real>(j: Spin, phases: [&[T]; 4]) -> Result<T> {
    let e = |i: usize, k: usize| correlator_spin_j(j, phases[i], phases[2 + k]);
    Ok(e(0, 0)? + e(1, 0)? + e(0, 1)? - e(1, 1)?)
}

/// `(2/3)(1 + cos(α−β) + cos(α′−β) + cos(α−β′) − cos(α′−β′))`
pub fn chsh_spin1<T: Real>(angles: [T; 4]) -> T {
    let [a, ap, b, bp] = angles;
    chsh_spin_j(Spin::ONE, [&[a], &[ap], &[b], &[bp]]).expect("one pair for spin 1")
}

/// Largest CHSH value reachable on the spin-`j` singlet with phase-flip observables.
pub fn spin_j_max<T: Real>(j: Spin) -> T {
    if j.is_integer() {
        let jj = T::lit(j.value());
        let two = T::lit(2.0);
        two / T::lit(j.dim() as f64) * (T::one() + two * jj * T::SQRT_2())
    } else {
        T::lit(2.0) * T::SQRT_2()
    }
}

/// `S(x) = Σ_n x^{4n+1} / √((2n)!(2n+1)!)`, summed by term ratio.
fn coherent_half_series<T: Real>(x: T) -> T {
    let eps = T::lit(COHERENT_SERIES_EPS);
    let x4 = x.powi(4);
    let mut term = x;
    let mut sum = term;
    for n in 0..COHERENT_SERIES_MAX {
        let k = T::lit(2.0 * n as f64);
        let denom =
            ((k + T::one()) * (k + T::lit(2.0)) * (k + T::lit(2.0)) * (k + T::lit(3.0))).sqrt();
        term = term * x4 / denom;
        sum += term;
        if term.abs() < eps * sum.abs() {
            break;
        }
    }
    sum
}

/// `Δ(η,σ) = Σ_{n,m} η^{4n+1} σ^{4m+1} / √((2n)!(2n+1)!(2m)!(2m+1)!)`
///
/// The double sum factorizes into a product of two single sums.
pub fn coherent_delta<T: Real>(eta: T, sigma: T) -> T {
    coherent_half_series(eta) * coherent_half_series(sigma)
}

/// `Ω = e^{−(η²+σ²)} / (1 + cos φ · e^{−2(η²+σ²)})`
pub fn coherent_omega<T: Real>(eta: T, sigma: T, phi: T) -> Result<T> {
    let s = eta * eta + sigma * sigma;
    let denom = T::one() + phi.cos() * (-(s + s)).exp();
    // Negated so that NaN is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(denom > T::construction_tol()) {
        return Err(Error::ZeroVector(
            "entangled coherent state vanishes (φ = π with η = σ = 0)".into(),
        ));
    }
    Ok((-s).exp() / denom)
}

/// `⟨A⊗B⟩ = 4ΩΔ (cos α cos β − cos φ sin α sin β)` on the entangled coherent state.
pub fn correlator_coherent<T: Real>(eta: T, sigma: T, phi: T, alpha: T, beta: T) -> Result<T> {
    let k = T::lit(4.0) * coherent_omega(eta, sigma, phi)? * coherent_delta(eta, sigma);
    Ok(k * angle_factor(phi, alpha, beta))
}

fn angle_factor<T: Real>(phi: T, alpha: T, beta: T) -> T {
    alpha.cos() * beta.cos() - phi.cos() * alpha.sin() * beta.sin()
}

pub fn chsh_coherent<T: Real>(eta: T, sigma: T, phi: T, angles: [T; 4]) -> Result<T> {
    let k = T::lit(4.0) * coherent_omega(eta, sigma, phi)? * coherent_delta(eta, sigma);
    let [a, ap, b, bp] = angles;
    Ok(k * chsh_combination(|i, j| angle_factor(phi, [a, ap][i], [b, bp][j])))
}

/// `4√2 ησ / sinh(η² + σ²)`: the `n = m = 0` part of the CHSH value at
/// `φ = π`, `(α, α′, β, β′) = (0, π/2, π/4, −π/4)`.
pub fn chsh_coherent_leading<T: Real>(eta: T, sigma: T) -> T {
    T::lit(4.0) * T::SQRT_2() * eta * sigma / (eta * eta + sigma * sigma).sinh()
}

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if !(lambda > T::zero() && lambda < T::one()) {
        return Err(invalid(
            "lambda",
            format!("must lie in (0, 1), got {lambda}"),
        ));
    }
    Ok(())
}

/// `⟨λ|A⊗B|λ⟩ = 2λ/(1+λ²) cos(α + β)`
pub fn correlator_squeezed<T: Real>(lambda: T, alpha: T, beta: T) -> Result<T> {
    check_lambda(lambda)?;
    Ok(squeezed_visibility(lambda) * (alpha + beta).cos())
}

fn squeezed_visibility<T: Real>(lambda: T) -> T {
    T::lit(2.0) * lambda / (T::one() + lambda * lambda)
}

pub fn chsh_squeezed<T: Real>(lambda: T, angles: [T; 4]) -> Result<T> {
    check_lambda(lambda)?;
    Ok(squeezed_visibility(lambda) * chsh_phi0_phase(angles))
}

/// `⟨GHZ|X₁⋯X_n|GHZ⟩ = −cos(Σ_k α_k)` for phase-flip observables on
/// `(|+…+⟩ − |−…−⟩)/√2`.
pub fn correlator_ghz<T: Real>(angles: &[T]) -> T {
    -angles.iter().fold(T::zero(), |s, &a| s + a).cos()
}

/// `⟨𝓜₃⟩` on the three-party GHZ state.
pub fn mermin3_ghz<T: Real>(angles: [T; 6]) -> T {
    let [a, ap, b, bp, c, cp] = angles;
    correlator_ghz(&[ap, b, c]) + correlator_ghz(&[a, bp, c]) + correlator_ghz(&[a, b, cp])
        - correlator_ghz(&[ap, bp, cp])
}

/// `⟨𝓜₄⟩` on the four-party GHZ state.
pub fn mermin4_ghz<T: Real>(angles: [T; 8]) -> T {
    let half = T::lit(0.5);
    (0u8..16).fold(T::zero(), |s, mask| {
        let pick = |party: usize| angles[2 * party + ((mask >> (3 - party)) & 1) as usize];
        let e = correlator_ghz(&[pick(0), pick(1), pick(2), pick(3)]);
        s + half * T::lit(f64::from(mermin4_sign(mask))) * e
    })
}

/// Which inequality a value is tested against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    Chsh,
    Mermin3,
    Mermin4,
}

impl Inequality {
    pub fn parties(self) -> usize {
        match self {
            Inequality::Chsh => 2,
            Inequality::Mermin3 => 3,
            Inequality::Mermin4 => 4,
        }
    }

    pub fn classical_bound(self) -> f64 {
        2.0
    }

    pub fn quantum_bound(self) -> f64 {
        match self {
            Inequality::Chsh => 2.0 * std::f64::consts::SQRT_2,
            Inequality::Mermin3 => 4.0,
            Inequality::Mermin4 => 4.0 * std::f64::consts::SQRT_2,
        }
    }
}

/// Free angles of one observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Setting {
    Phase { alpha: f64 },
    Polar { theta: f64, alpha: f64 },
    PairPhases { alphas: Vec<f64> },
}

/// Settings of every party, each as `[unprimed, primed]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSet {
    pub parties: Vec<[Setting; 2]>,
}

impl AngleSet {
    /// From a flat `(x, x′, y, y′, …)` phase list.
    pub fn phases(flat: &[f64]) -> Self {
        Self {
            parties: flat
                .chunks(2)
                .map(|p| {
                    [
                        Setting::Phase { alpha: p[0] },
                        Setting::Phase { alpha: p[1] },
                    ]
                })
                .collect(),
        }
    }

    /// From polar settings ordered `(A, A′, B, B′, …)`.
    pub fn polar(settings: &[PolarSetting<f64>]) -> Self {
        let s = |p: &PolarSetting<f64>| Setting::Polar {
            theta: p.theta(),
            alpha: p.alpha(),
        };
        Self {
            parties: settings.chunks(2).map(|p| [s(&p[0]), s(&p[1])]).collect(),
        }
    }

    /// From per-pair phase lists ordered `(A, A′, B, B′)`.
    pub fn pair_phases(lists: [&[f64]; 4]) -> Self {
        let s = |v: &[f64]| Setting::PairPhases { alphas: v.to_vec() };
        Self {
            parties: vec![[s(lists[0]), s(lists[1])], [s(lists[2]), s(lists[3])]],
        }
    }
}

/// A correlator value classified against its bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorReport {
    pub value: f64,
    pub classical_bound: f64,
    pub quantum_bound: f64,
    /// `|value| > classical_bound`, strictly.
    pub violated: bool,
    pub settings: AngleSet,
}

/// Margin above the classical bound a value must clear to count as a violation,
/// so that rounding at an exact threshold is not reported as one.
pub const VIOLATION_MARGIN: f64 = 1e-12;

impl CorrelatorReport {
    pub fn new(kind: Inequality, value: f64, settings: AngleSet) -> Self {
        let classical_bound = kind.classical_bound();
        Self {
            value,
            classical_bound,
            quantum_bound: kind.quantum_bound(),
            violated: value.abs() > classical_bound + VIOLATION_MARGIN,
            settings,
        }
    }
}

/// `⟨ψ|O|ψ⟩` for a Hermitian Bell or Mermin operator, classified against `kind`.
pub fn generic_correlator<T: Real>(
    psi: &StateVector<T>,
    op: &DenseOperator<T>,
    kind: Inequality,
    settings: AngleSet,
) -> Result<CorrelatorReport> {
    let v = expectation(op, psi)?;
    if !op.is_hermitian() {
        return Err(Error::NotDichotomic(
            "correlator operator is not Hermitian".into(),
        ));
    }
    Ok(CorrelatorReport::new(kind, v.re.as_f64(), settings))
}
