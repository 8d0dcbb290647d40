//! Dense complex states and operators on finite tensor-product spaces.
//!
//! Amplitudes are stored row-major with the leftmost tensor factor most
//! significant: for shape `(dA, dB)` the amplitude of `|i⟩⊗|j⟩` sits at
//! `i·dB + j`. Every value here is immutable after construction.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cr, Real};

/// Normalized pure state with a declared subsystem shape.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amplitudes: Vec<Complex<T>>,
    shape: Vec<usize>,
}

impl<T: Real> StateVector<T> {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<Complex<T>>, shape: Vec<usize>) -> Result<Self> {
        check_shape(&shape, amplitudes.len())?;
        check_finite(&amplitudes, "state amplitudes")?;
        let norm_sqr = norm_sqr(&amplitudes);
        if (norm_sqr - T::one()).abs() > T::construction_tol() {
            return Err(Error::NotNormalized {
                norm_sqr: norm_sqr.as_f64(),
            });
        }
        Ok(Self { amplitudes, shape })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>, shape: Vec<usize>) -> Result<Self> {
        check_shape(&shape, amplitudes.len())?;
        check_finite(&amplitudes, "state amplitudes")?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm <= T::epsilon() {
            return Err(Error::ZeroVector(format!(
                "norm {:.3e} on shape {:?}",
                norm.as_f64(),
                shape
            )));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self { amplitudes, shape })
    }

    /// Real amplitudes, renormalized.
    pub fn from_real(amplitudes: &[T], shape: Vec<usize>) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&x| cr(x)).collect(), shape)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(index: usize, shape: Vec<usize>) -> Result<Self> {
        let dim: usize = shape.iter().product();
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amps = vec![cr(T::zero()); dim];
        amps[index] = cr(T::one());
        Self::new(amps, shape)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn norm(&self) -> T {
        norm_sqr(&self.amplitudes).sqrt()
    }
}

/// Square complex matrix with its Hermitian flag computed once.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<T: Real> {
    dim: usize,
    entries: Vec<Complex<T>>,
    hermitian: bool,
}

impl<T: Real> DenseOperator<T> {
    /// Row-major entries of a `dim × dim` matrix.
    pub fn from_entries(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        check_finite(&entries, "operator entries")?;
        let hermitian = hermitian_within(dim, &entries, T::construction_tol());
        Ok(Self {
            dim,
            entries,
            hermitian,
        })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::from_entries(dim, entries)
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_entries(dim, rows.iter().flatten().copied().collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![cr(T::zero()); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = cr(T::one());
        }
        Self {
            dim,
            entries,
            hermitian: true,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![cr(T::zero()); dim * dim],
            hermitian: true,
        }
    }

    /// Diagonal operator.
    pub fn diagonal(diag: &[T]) -> Self {
        let dim = diag.len();
        let mut entries = vec![cr(T::zero()); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = cr(d);
        }
        Self {
            dim,
            entries,
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// `O = O†` and `O² = 1` within the construction tolerance.
    pub fn is_dichotomic(&self) -> bool {
        self.hermitian
            && self.mul_op(self).max_abs_diff(&Self::identity(self.dim)) < T::construction_tol()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![cr(T::zero()); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        Self {
            dim: n,
            entries,
            hermitian: self.hermitian,
        }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let entries: Vec<_> = self.entries.iter().map(|&z| z * factor).collect();
        let hermitian = hermitian_within(self.dim, &entries, T::construction_tol());
        Self {
            dim: self.dim,
            entries,
            hermitian,
        }
    }

    /// `O x`
    pub fn apply(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.dim;
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        Ok((0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(x)
                    .fold(cr(T::zero()), |s, (a, b)| s + a * b)
            })
            .collect())
    }

    /// Largest entrywise modulus of `self − other`; `∞` on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.dim != other.dim {
            return T::infinity();
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    fn combine(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let entries: Vec<_> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let hermitian = hermitian_within(self.dim, &entries, T::construction_tol());
        Self {
            dim: self.dim,
            entries,
            hermitian,
        }
    }

    fn mul_op(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let n = self.dim;
        let mut entries = vec![cr(T::zero()); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                for (acc, b) in entries[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *acc += a * b;
                }
            }
        }
        let hermitian = hermitian_within(n, &entries, T::construction_tol());
        Self {
            dim: n,
            entries,
            hermitian,
        }
    }

    /// Eigenvalues in ascending order; requires a Hermitian operator.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        if !self.hermitian {
            return Err(Error::InvalidParameter {
                name: "operator",
                reason: "eigenvalues requested for a non-Hermitian operator".into(),
            });
        }
        linalg::hermitian_eigenvalues(&self.entries, self.dim)
    }
}

impl<'a, T: Real> Add<&'a DenseOperator<T>> for &'a DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn add(self, rhs: &'a DenseOperator<T>) -> DenseOperator<T> {
        self.combine(rhs, |a, b| a + b)
    }
}

impl<'a, T: Real> Sub<&'a DenseOperator<T>> for &'a DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn sub(self, rhs: &'a DenseOperator<T>) -> DenseOperator<T> {
        self.combine(rhs, |a, b| a - b)
    }
}

impl<'a, T: Real> Mul<&'a DenseOperator<T>> for &'a DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn mul(self, rhs: &'a DenseOperator<T>) -> DenseOperator<T> {
        self.mul_op(rhs)
    }
}

impl<T: Real> Neg for &DenseOperator<T> {
    type Output = DenseOperator<T>;
    fn neg(self) -> DenseOperator<T> {
        self.scale(cr(-T::one()))
    }
}

/// `|a⟩ ⊗ |b⟩`, shapes concatenated.
pub fn tensor_state<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> StateVector<T> {
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    let shape = a.shape.iter().chain(&b.shape).copied().collect();
    StateVector { amplitudes, shape }
}

/// Kronecker product `A ⊗ B`, consistent with [`tensor_state`].
pub fn tensor_op<T: Real>(a: &DenseOperator<T>, b: &DenseOperator<T>) -> DenseOperator<T> {
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut entries = vec![cr(T::zero()); n * n];
    for i in 0..na {
        for j in 0..na {
            let x = a.entries[i * na + j];
            if x.re == T::zero() && x.im == T::zero() {
                continue;
            }
            for k in 0..nb {
                let row = (i * nb + k) * n + j * nb;
                for (l, y) in b.entries[k * nb..(k + 1) * nb].iter().enumerate() {
                    entries[row + l] = x * y;
                }
            }
        }
    }
    let hermitian = hermitian_within(n, &entries, T::construction_tol());
    DenseOperator {
        dim: n,
        entries,
        hermitian,
    }
}

/// Kronecker product of a list of factors, leftmost most significant.
pub fn tensor_ops<T: Real>(factors: &[&DenseOperator<T>]) -> DenseOperator<T> {
    factors
        .iter()
        .fold(DenseOperator::identity(1), |acc, f| tensor_op(&acc, f))
}

/// `⟨ψ|O|ψ⟩`
pub fn expectation<T: Real>(op: &DenseOperator<T>, psi: &StateVector<T>) -> Result<Complex<T>> {
    let o_psi = op.apply(&psi.amplitudes)?;
    Ok(inner(&psi.amplitudes, &o_psi))
}

/// `[A, B] = AB − BA`
pub fn commutator<T: Real>(a: &DenseOperator<T>, b: &DenseOperator<T>) -> Result<DenseOperator<T>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(&(a * b) - &(b * a))
}

/// Operator norm `sup ‖Dx‖/‖x‖`.
///
/// Hermitian input: largest absolute eigenvalue. Otherwise the square root of
/// the largest eigenvalue of `D†D`.
pub fn operator_norm<T: Real>(d: &DenseOperator<T>) -> Result<T> {
    if d.hermitian {
        let ev = d.eigenvalues()?;
        Ok(ev.iter().map(|x| x.abs()).fold(T::zero(), T::max))
    } else {
        let gram = &d.adjoint() * d;
        let ev = linalg::hermitian_eigenvalues(&gram.entries, gram.dim)?;
        Ok(ev
            .last()
            .copied()
            .unwrap_or(T::zero())
            .max(T::zero())
            .sqrt())
    }
}

pub(crate) fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(cr(T::zero()), |s, (x, y)| s + x.conj() * y)
}

pub(crate) fn norm_sqr<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().fold(T::zero(), |s, z| s + z.norm_sqr())
}

/// `max |e − e†| < tol`, walked in tiles so both triangles stay in cache.
fn hermitian_within<T: Real>(n: usize, e: &[Complex<T>], tol: T) -> bool {
    const TILE: usize = 32;
    let tol_sq = tol * tol;
    for bi in (0..n).step_by(TILE) {
        for bj in (bi..n).step_by(TILE) {
            for i in bi..(bi + TILE).min(n) {
                for j in bj.max(i)..(bj + TILE).min(n) {
                    if (e[i * n + j] - e[j * n + i].conj()).norm_sqr() >= tol_sq {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn check_shape(shape: &[usize], len: usize) -> Result<()> {
    if shape.is_empty() || shape.contains(&0) || shape.iter().product::<usize>() != len {
        return Err(Error::BadShape {
            shape: shape.to_vec(),
            len,
        });
    }
    Ok(())
}

fn check_finite<T: Real>(v: &[Complex<T>], what: &'static str) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::pauli;
    use num_complex::Complex64;

    fn real_state(v: &[f64], shape: Vec<usize>) -> StateVector<f64> {
        StateVector::from_real(v, shape).unwrap()
    }

    #[test]
    fn tensor_state_examples() {
        let plus = StateVector::<f64>::basis(0, vec![2]).unwrap();
        let minus = StateVector::<f64>::basis(1, vec![2]).unwrap();
        let pm = tensor_state(&plus, &minus);
        assert_eq!(pm.shape(), &[2, 2]);
        assert_eq!(pm.amplitudes()[1], Complex64::new(1.0, 0.0));
        let pp = tensor_state(&plus, &plus);
        assert_eq!(pp.amplitudes()[0], Complex64::new(1.0, 0.0));
        let h = real_state(&[1.0, 1.0], vec![2]);
        let hh = tensor_state(&h, &h);
        for a in hh.amplitudes() {
            assert!((a.re - 0.5).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn tensor_op_examples() {
        let [_, _, sz] = pauli::<f64>();
        let id = DenseOperator::<f64>::identity(2);
        let pm = StateVector::<f64>::basis(1, vec![2, 2]).unwrap();
        let out = tensor_op(&sz, &id).apply(pm.amplitudes()).unwrap();
        assert_eq!(out, pm.amplitudes());
        assert_eq!(tensor_op(&id, &id), DenseOperator::identity(4));
    }

    #[test]
    fn sigma_x_pair_fixes_phi0() {
        let [sx, _, _] = pauli::<f64>();
        let phi0 = real_state(&[1.0, 0.0, 0.0, 1.0], vec![2, 2]);
        let out = tensor_op(&sx, &sx).apply(phi0.amplitudes()).unwrap();
        for (a, b) in out.iter().zip(phi0.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let psi = StateVector::<f64>::basis(0, vec![2]).unwrap();
        let op = DenseOperator::<f64>::identity(3);
        assert!(matches!(
            expectation(&op, &psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn commutator_of_paulis() {
        let [sx, sy, sz] = pauli::<f64>();
        assert!(commutator(&sx, &sx).unwrap().max_abs() == 0.0);
        let c = commutator(&sx, &sy).unwrap();
        let want = sz.scale(Complex64::new(0.0, 2.0));
        assert!(c.max_abs_diff(&want) < 1e-15);
        assert!(commutator(&sx, &DenseOperator::identity(3)).is_err());
    }

    #[test]
    fn identity_norm_is_one() {
        for n in [1, 2, 5, 9] {
            assert!(
                (operator_norm(&DenseOperator::<f64>::identity(n)).unwrap() - 1.0).abs() < 1e-14
            );
        }
    }

    #[test]
    fn rejects_unnormalized_and_bad_shape() {
        let v = vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            StateVector::new(v.clone(), vec![2]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::normalized(v, vec![3]),
            Err(Error::BadShape { .. })
        ));
        let z = vec![Complex64::new(0.0, 0.0); 2];
        assert!(matches!(
            StateVector::normalized(z, vec![2]),
            Err(Error::ZeroVector(_))
        ));
    }

    #[test]
    fn non_hermitian_norm_of_nilpotent() {
        // [[0, 3], [0, 0]] has norm 3.
        let z = Complex64::new(0.0, 0.0);
        let d = DenseOperator::from_entries(2, vec![z, Complex64::new(3.0, 0.0), z, z]).unwrap();
        assert!(!d.is_hermitian());
        assert!((operator_norm(&d).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn f32_tensor_core() {
        let [sx, sy, sz] = pauli::<f32>();
        let c = commutator(&sx, &sy).unwrap();
        assert!(c.max_abs_diff(&sz.scale(Complex::new(0.0f32, 2.0))) < 1e-6);
        assert!((operator_norm(&tensor_op(&sx, &sz)).unwrap() - 1.0).abs() < 1e-5);
    }
}
