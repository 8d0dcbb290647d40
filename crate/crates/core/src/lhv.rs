//! Monte-Carlo local-hidden-variable models.
//!
//! A model draws a hidden variable `λ` and answers each measurement with a
//! deterministic `±1` that depends only on the local setting and `λ`.
//!
//! Sampling is split into blocks of [`BLOCK_SIZE`] draws. Block `k` uses a
//! ChaCha8 generator seeded with `seed` on stream `k`, and block sums are
//! merged in block order, so an estimate depends only on `(seed, n)` and not
//! on how many threads ran it.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const BLOCK_SIZE: u64 = 1 << 16;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector([f64; 3]);

impl UnitVector {
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self(v))
    }

    pub fn normalize(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self(v.map(|x| x / norm)))
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        Self([
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ])
    }

    /// Uniform on the sphere via a normalized Gaussian triple.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v: [f64; 3] = [
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            ];
            if let Ok(u) = Self::normalize(v) {
                return u;
            }
        }
    }

    pub fn get(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0).map(|(a, b)| a * b).sum()
    }

    pub fn angle_to(&self, other: &Self) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }
}

/// `+1` for non-negative input, `−1` otherwise.
pub fn sign(x: f64) -> i8 {
    if x >= 0.0 {
        1
    } else {
        -1
    }
}

/// Hidden-variable distribution with two local response functions.
///
/// `response_b(a, λ) = −response_a(a, λ)` must hold for every `a` and `λ`.
pub trait LhvModel: Send + Sync {
    fn sample_hidden(&self, rng: &mut dyn RngCore) -> UnitVector;
    fn response_a(&self, a: &UnitVector, lambda: &UnitVector) -> i8;
    fn response_b(&self, b: &UnitVector, lambda: &UnitVector) -> i8;
}

/// `λ` uniform on the sphere, `A = sign(a·λ)`, `B = −sign(b·λ)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SignModel;

impl LhvModel for SignModel {
    fn sample_hidden(&self, rng: &mut dyn RngCore) -> UnitVector {
        UnitVector::random(rng)
    }

    fn response_a(&self, a: &UnitVector, lambda: &UnitVector) -> i8 {
        sign(a.dot(lambda))
    }

    fn response_b(&self, b: &UnitVector, lambda: &UnitVector) -> i8 {
        -sign(b.dot(lambda))
    }
}

/// `λ` uniform on the sphere, `A = sign(a·λ − t)`, `B = −sign(b·λ − t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedSignModel {
    shift: f64,
}

impl ShiftedSignModel {
    pub fn new(shift: f64) -> Result<Self> {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(shift.abs() < 1.0) {
            return Err(invalid(
                "shift",
                format!("must lie in (−1, 1), got {shift}"),
            ));
        }
        Ok(Self { shift })
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }
}

impl LhvModel for ShiftedSignModel {
    fn sample_hidden(&self, rng: &mut dyn RngCore) -> UnitVector {
        UnitVector::random(rng)
    }

    fn response_a(&self, a: &UnitVector, lambda: &UnitVector) -> i8 {
        sign(a.dot(lambda) - self.shift)
    }

    fn response_b(&self, b: &UnitVector, lambda: &UnitVector) -> i8 {
        -sign(b.dot(lambda) - self.shift)
    }
}

/// Exact correlation of [`SignModel`] for settings at angle `θ`: `−1 + 2θ/π`.
pub fn sign_model_correlation(theta: f64) -> f64 {
    -1.0 + 2.0 * theta / std::f64::consts::PI
}

/// Singlet correlation `−a·b`.
pub fn quantum_correlation(a: &UnitVector, b: &UnitVector) -> f64 {
    -a.dot(b)
}

/// Settings ordered `(a, a′, b, b′)`.
pub fn quantum_chsh(s: &[UnitVector; 4]) -> f64 {
    let e = |i: usize, j: usize| quantum_correlation(&s[i], &s[2 + j]);
    e(0, 0) + e(1, 0) + e(0, 1) - e(1, 1)
}

/// Coplanar settings at which the singlet reaches `|CHSH| = 2√2`.
pub fn tsirelson_settings() -> [UnitVector; 4] {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    [0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4].map(|t| UnitVector::from_polar(t, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LhvEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshLhv {
    pub estimate: LhvEstimate,
    /// Draws whose combination `𝒞` did not satisfy `𝒞² = 4`.
    pub square_defects: u64,
}

#[derive(Default, Clone, Copy)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
    defects: u64,
}

impl Moments {
    fn merge(self, o: Self) -> Self {
        Self {
            n: self.n + o.n,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
            defects: self.defects + o.defects,
        }
    }

    fn estimate(self) -> LhvEstimate {
        let n = self.n as f64;
        let mean = self.sum / n;
        let var = if self.n > 1 {
            ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        LhvEstimate {
            mean,
            std_error: (var / n).sqrt(),
            samples: self.n,
        }
    }
}

/// Draws `n` hidden variables in seeded blocks and accumulates `f(λ)`.
fn sample_blocks<M: LhvModel + ?Sized>(
    model: &M,
    n: u64,
    seed: u64,
    f: impl Fn(&UnitVector) -> (f64, bool) + Sync,
) -> Result<Moments> {
    if n == 0 {
        return Err(invalid("samples", "at least one sample is required"));
    }
    let blocks = n.div_ceil(BLOCK_SIZE);
    let parts: Vec<Moments> = (0..blocks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let len = BLOCK_SIZE.min(n - k * BLOCK_SIZE);
            let mut m = Moments::default();
            for _ in 0..len {
                let lambda = model.sample_hidden(&mut rng);
                let (v, defect) = f(&lambda);
                m.n += 1;
                m.sum += v;
                m.sum_sq += v * v;
                m.defects += u64::from(defect);
            }
            m
        })
        .collect();
    Ok(parts.into_iter().fold(Moments::default(), Moments::merge))
}

/// Monte-Carlo estimate of `ℰ(a,b) = ∫ dλ ρ(λ) 𝒜(a,λ) ℬ(b,λ)`.
pub fn estimate_e<M: LhvModel + ?Sized>(
    model: &M,
    a: &UnitVector,
    b: &UnitVector,
    n: u64,
    seed: u64,
) -> Result<LhvEstimate> {
    let m = sample_blocks(model, n, seed, |l| {
        (
            f64::from(model.response_a(a, l) * model.response_b(b, l)),
            false,
        )
    })?;
    Ok(m.estimate())
}

/// Per-draw `𝒞(λ) = 𝒜(a)ℬ(b) + 𝒜(a′)ℬ(b) + 𝒜(a)ℬ(b′) − 𝒜(a′)ℬ(b′)`.
pub fn combination<M: LhvModel + ?Sized>(
    model: &M,
    s: &[UnitVector; 4],
    lambda: &UnitVector,
) -> i8 {
    let ra = [
        model.response_a(&s[0], lambda),
        model.response_a(&s[1], lambda),
    ];
    let rb = [
        model.response_b(&s[2], lambda),
        model.response_b(&s[3], lambda),
    ];
    ra[0] * rb[0] + ra[1] * rb[0] + ra[0] * rb[1] - ra[1] * rb[1]
}

/// Monte-Carlo CHSH combination with settings ordered `(a, a′, b, b′)`.
pub fn chsh_lhv<M: LhvModel + ?Sized>(
    model: &M,
    s: &[UnitVector; 4],
    n: u64,
    seed: u64,
) -> Result<ChshLhv> {
    let m = sample_blocks(model, n, seed, |l| {
        let c = combination(model, s, l);
        (f64::from(c), c * c != 4)
    })?;
    Ok(ChshLhv {
        estimate: m.estimate(),
        square_defects: m.defects,
    })
}
