//! Dichotomic observables and the composite Bell-CHSH and Mermin operators.
//!
//! Phase convention: the phase-flip observable maps the first member `p` of
//! each pair to `e^{iα}` times the second member `q`, and `q` back to
//! `e^{−iα} p`. For qubits `p = |+⟩`, for spin `j` the pairs are `(|m⟩, |−m⟩)`
//! with `m > 0`, and for a Fock mode they are `(|2n⟩, |2n+1⟩)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c, cr, phase, Real};
use crate::spin::Spin;
use crate::states::FockCutoff;
use crate::tensor::{tensor_op, tensor_ops, DenseOperator};

/// Phase angle of a phase-flip observable, canonicalized to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSetting<T: Real> {
    alpha: T,
}

impl<T: Real> PhaseSetting<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: "phase must be finite".into(),
            });
        }
        Ok(Self {
            alpha: wrap_angle(alpha),
        })
    }

    pub fn alpha(self) -> T {
        self.alpha
    }
}

/// Direction `n̂ = (sin θ cos α, sin θ sin α, cos θ)` with `θ ∈ [0, π]`, `α ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarSetting<T: Real> {
    theta: T,
    alpha: T,
}

impl<T: Real> PolarSetting<T> {
    /// Any finite `(θ, α)`; `θ` outside `[0, π]` is folded onto the same
    /// direction by `θ → 2π − θ`, `α → α + π`.
    pub fn new(theta: T, alpha: T) -> Result<Self> {
        if !theta.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta/alpha",
                reason: "polar angles must be finite".into(),
            });
        }
        let mut theta = wrap_angle(theta);
        let mut alpha = alpha;
        if theta > T::PI() {
            theta = T::TAU() - theta;
            alpha += T::PI();
        }
        Ok(Self {
            theta,
            alpha: wrap_angle(alpha),
        })
    }

    pub fn theta(self) -> T {
        self.theta
    }

    pub fn alpha(self) -> T {
        self.alpha
    }

    pub fn direction(self) -> [T; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sa, ca) = self.alpha.sin_cos();
        [st * ca, st * sa, ct]
    }
}

pub(crate) fn wrap_angle<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let mut r = x % tau;
    if r < T::zero() {
        r += tau;
    }
    if r >= tau {
        r -= tau;
    }
    r
}

/// Disjoint basis pairs plus fixed points, together partitioning `0..dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingScheme {
    dim: usize,
    pairs: Vec<(usize, usize)>,
    fixed_points: Vec<usize>,
}

impl PairingScheme {
    pub fn new(dim: usize, pairs: Vec<(usize, usize)>, fixed_points: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; dim];
        let indices = pairs
            .iter()
            .flat_map(|&(p, q)| [p, q])
            .chain(fixed_points.iter().copied());
        for i in indices {
            if i >= dim {
                return Err(Error::MalformedScheme(format!(
                    "index {i} outside dimension {dim}"
                )));
            }
            if seen[i] {
                return Err(Error::MalformedScheme(format!("index {i} used twice")));
            }
            seen[i] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::MalformedScheme(format!(
                "index {missing} not covered"
            )));
        }
        Ok(Self {
            dim,
            pairs,
            fixed_points,
        })
    }

    /// `(|+⟩, |−⟩)`
    pub fn qubit() -> Self {
        Self {
            dim: 2,
            pairs: vec![(0, 1)],
            fixed_points: Vec::new(),
        }
    }

    /// `(|m⟩, |−m⟩)` for `m = j, j−1, …, > 0`; `|0⟩` fixed for integer `j`.
    pub fn spin(j: Spin) -> Self {
        let d = j.dim();
        let pairs = (0..j.pair_count()).map(|k| (k, d - 1 - k)).collect();
        let fixed_points = if j.is_integer() {
            vec![d / 2]
        } else {
            Vec::new()
        };
        Self {
            dim: d,
            pairs,
            fixed_points,
        }
    }

    /// `(|2n⟩, |2n+1⟩)` over all retained levels.
    pub fn fock(cutoff: FockCutoff) -> Self {
        let n = cutoff.levels();
        Self {
            dim: n,
            pairs: (0..n / 2).map(|k| (2 * k, 2 * k + 1)).collect(),
            fixed_points: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn fixed_points(&self) -> &[usize] {
        &self.fixed_points
    }
}

/// Phase-flip observable with one phase shared by every pair.
pub fn phase_flip_observable<T: Real>(
    s: PhaseSetting<T>,
    scheme: &PairingScheme,
) -> DenseOperator<T> {
    let phases = vec![s; scheme.pairs.len()];
    phase_flip_per_pair(&phases, scheme).expect("one phase per pair")
}

/// Phase-flip observable with an independent phase on every pair.
pub fn phase_flip_per_pair<T: Real>(
    phases: &[PhaseSetting<T>],
    scheme: &PairingScheme,
) -> Result<DenseOperator<T>> {
    if phases.len() != scheme.pairs.len() {
        return Err(Error::MalformedScheme(format!(
            "{} phases for {} pairs",
            phases.len(),
            scheme.pairs.len()
        )));
    }
    let n = scheme.dim;
    let mut entries = vec![cr(T::zero()); n * n];
    for (&(p, q), s) in scheme.pairs.iter().zip(phases) {
        let e = phase(s.alpha);
        entries[q * n + p] = e;
        entries[p * n + q] = e.conj();
    }
    for &f in &scheme.fixed_points {
        entries[f * n + f] = cr(T::one());
    }
    DenseOperator::from_entries(n, entries)
}

/// `n̂·σ⃗` on a qubit.
pub fn polar_observable<T: Real>(s: PolarSetting<T>) -> DenseOperator<T> {
    let (st, ct) = s.theta.sin_cos();
    let e = phase(s.alpha);
    let entries = vec![cr(ct), e.conj() * st, e * st, cr(-ct)];
    DenseOperator::from_entries(2, entries).expect("2×2 entries")
}

/// `σx, σy, σz`
pub fn pauli<T: Real>() -> [DenseOperator<T>; 3] {
    let (o, z, i) = (T::one(), T::zero(), T::one());
    let sx = DenseOperator::from_entries(2, vec![cr(z), cr(o), cr(o), cr(z)]);
    let sy = DenseOperator::from_entries(2, vec![cr(z), c(z, -i), c(z, i), cr(z)]);
    let sz = DenseOperator::from_entries(2, vec![cr(o), cr(z), cr(z), cr(-o)]);
    [sx.unwrap(), sy.unwrap(), sz.unwrap()]
}

/// Pseudospin operators `(sx, sy, sz)` as block sums over `(|2n⟩, |2n+1⟩)`.
///
/// In Fock order each block is `(σx, −σy, −σz)`; in the order `(|2n+1⟩, |2n⟩)`
/// it is exactly the Pauli triple.
pub fn pseudospin_operators<T: Real>(cutoff: FockCutoff) -> [DenseOperator<T>; 3] {
    let n = cutoff.levels();
    let zero = cr(T::zero());
    let mut sx = vec![zero; n * n];
    let mut sy = vec![zero; n * n];
    let mut sz = vec![zero; n * n];
    let i = c(T::zero(), T::one());
    for k in 0..n / 2 {
        let (e, o) = (2 * k, 2 * k + 1);
        sx[o * n + e] = cr(T::one());
        sx[e * n + o] = cr(T::one());
        sy[e * n + o] = i;
        sy[o * n + e] = -i;
        sz[o * n + o] = cr(T::one());
        sz[e * n + e] = cr(-T::one());
    }
    [sx, sy, sz].map(|m| DenseOperator::from_entries(n, m).expect("square block sum"))
}

/// Truncated annihilation operator `a|n⟩ = √n |n−1⟩`.
pub fn annihilation<T: Real>(cutoff: FockCutoff) -> DenseOperator<T> {
    let n = cutoff.levels();
    DenseOperator::from_fn(n, |i, j| {
        if j == i + 1 {
            cr(T::lit(j as f64).sqrt())
        } else {
            cr(T::zero())
        }
    })
    .expect("square")
}

/// Spin matrices `(Jx, Jy, Jz)` built from the ladder operators
/// `⟨m±1|J±|m⟩ = √(j(j+1) − m(m±1))`. Basis index `k` carries `m = j − k`.
pub fn spin_matrices<T: Real>(j: Spin) -> [DenseOperator<T>; 3] {
    let d = j.dim();
    let jj = T::lit(j.value());
    let half = T::lit(0.5);
    let m_of = |k: usize| T::lit(j.twice_m(k) as f64) * half;
    // J+ has entries at (k−1, k): raising m = j − k to m + 1.
    let raise = |k: usize| {
        let m = m_of(k);
        (jj * (jj + T::one()) - m * (m + T::one()))
            .max(T::zero())
            .sqrt()
    };
    let jx = DenseOperator::from_fn(d, |r, col| {
        if col == r + 1 {
            cr(raise(col) * half)
        } else if r == col + 1 {
            cr(raise(r) * half)
        } else {
            cr(T::zero())
        }
    });
    let jy = DenseOperator::from_fn(d, |r, col| {
        // (J+ − J−)/(2i): −i/2 on the J+ slot, +i/2 on the J− slot.
        if col == r + 1 {
            c(T::zero(), -raise(col) * half)
        } else if r == col + 1 {
            c(T::zero(), raise(r) * half)
        } else {
            cr(T::zero())
        }
    });
    let jz = DenseOperator::diagonal(&(0..d).map(m_of).collect::<Vec<_>>());
    [jx.expect("square"), jy.expect("square"), jz]
}

fn require_dichotomic<T: Real>(ops: &[(&str, &DenseOperator<T>)]) -> Result<()> {
    for (name, op) in ops {
        if !op.is_dichotomic() {
            return Err(Error::NotDichotomic(format!(
                "{name} fails O = O† or O² = 1"
            )));
        }
    }
    Ok(())
}

fn require_same_dim<T: Real>(a: &DenseOperator<T>, b: &DenseOperator<T>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `𝒞 = (A + A′)⊗B + (A − A′)⊗B′`
pub fn chsh_operator<T: Real>(
    a: &DenseOperator<T>,
    a_p: &DenseOperator<T>,
    b: &DenseOperator<T>,
    b_p: &DenseOperator<T>,
) -> Result<DenseOperator<T>> {
    require_same_dim(a, a_p)?;
    require_same_dim(b, b_p)?;
    require_dichotomic(&[("A", a), ("A'", a_p), ("B", b), ("B'", b_p)])?;
    Ok(&tensor_op(&(a + a_p), b) + &tensor_op(&(a - a_p), b_p))
}

/// `𝓜₃ = A′BC + AB′C + ABC′ − A′B′C′`
pub fn mermin3_operator<T: Real>(parties: [[&DenseOperator<T>; 2]; 3]) -> Result<DenseOperator<T>> {
    for (k, [x, xp]) in parties.iter().enumerate() {
        require_same_dim(x, xp)?;
        let names = [["A", "A'"], ["B", "B'"], ["C", "C'"]][k];
        require_dichotomic(&[(names[0], x), (names[1], xp)])?;
    }
    let [[a, ap], [b, bp], [cc, cp]] = parties;
    let terms = [
        (T::one(), [ap, b, cc]),
        (T::one(), [a, bp, cc]),
        (T::one(), [a, b, cp]),
        (-T::one(), [ap, bp, cp]),
    ];
    Ok(sum_terms(&terms))
}

/// Sign of each term of `2𝓜₄`, indexed by the primed-party bitmask
/// (bit 3 = A′, bit 2 = B′, bit 1 = C′, bit 0 = D′). The sign depends only on
/// the number of primes: `−, +, +, −, −` for 0 through 4.
pub fn mermin4_sign(mask: u8) -> i8 {
    match mask.count_ones() {
        0 => -1,
        1 | 2 => 1,
        _ => -1,
    }
}

/// `𝓜₄ = ½ Σ_{primed subsets} sign · X₁X₂X₃X₄` over all sixteen terms.
pub fn mermin4_operator<T: Real>(parties: [[&DenseOperator<T>; 2]; 4]) -> Result<DenseOperator<T>> {
    for (k, [x, xp]) in parties.iter().enumerate() {
        require_same_dim(x, xp)?;
        let names = [["A", "A'"], ["B", "B'"], ["C", "C'"], ["D", "D'"]][k];
        require_dichotomic(&[(names[0], x), (names[1], xp)])?;
    }
    let half = T::lit(0.5);
    let terms: Vec<(T, [&DenseOperator<T>; 4])> = (0u8..16)
        .map(|mask| {
            let pick = |party: usize| parties[party][((mask >> (3 - party)) & 1) as usize];
            (
                half * T::lit(f64::from(mermin4_sign(mask))),
                [pick(0), pick(1), pick(2), pick(3)],
            )
        })
        .collect();
    Ok(sum_terms(&terms))
}

fn sum_terms<T: Real, const K: usize>(terms: &[(T, [&DenseOperator<T>; K])]) -> DenseOperator<T> {
    let mut acc: Option<DenseOperator<T>> = None;
    for (coef, factors) in terms {
        let t = tensor_ops(factors).scale(cr(*coef));
        acc = Some(match acc {
            Some(a) => &a + &t,
            None => t,
        });
    }
    acc.expect("at least one term")
}

/// Complex unit `i` as a convenience for identity checks.
pub fn imaginary_unit<T: Real>() -> Complex<T> {
    c(T::zero(), T::one())
}
