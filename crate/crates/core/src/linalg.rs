//! Dense eigenvalue and singular-value kernels for small complex matrices.
//!
//! Matrices are row-major `n × n` (or `rows × cols`) slices of `Complex<T>`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_QL_SWEEPS: usize = 64;
const MAX_JACOBI_SWEEPS: usize = 80;

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Householder reduction to a Hermitian tridiagonal form, whose off-diagonal
/// moduli give a real symmetric tridiagonal matrix with the same spectrum,
/// followed by implicit QL with Wilkinson shifts. Only the lower triangle of
/// `h` is read.
pub fn hermitian_eigenvalues<T: Real>(h: &[Complex<T>], n: usize) -> Result<Vec<T>> {
    assert_eq!(h.len(), n * n, "matrix storage does not match dimension");
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(h, n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(d)
}

/// Returns the diagonal and the moduli of the sub-diagonal (`e[n-1] = 0`).
fn tridiagonalize<T: Real>(h: &[Complex<T>], n: usize) -> (Vec<T>, Vec<T>) {
    // Work on a full Hermitian copy rebuilt from the lower triangle.
    let mut a = vec![Complex::new(T::zero(), T::zero()); n * n];
    for i in 0..n {
        for j in 0..=i {
            let v = h[i * n + j];
            a[i * n + j] = v;
            a[j * n + i] = v.conj();
        }
        a[i * n + i] = Complex::new(h[i * n + i].re, T::zero());
    }

    let mut e = vec![T::zero(); n];
    let mut w = vec![Complex::new(T::zero(), T::zero()); n];
    let mut p = vec![Complex::new(T::zero(), T::zero()); n];

    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let alpha = (lo..n)
            .map(|i| a[i * n + k].norm_sqr())
            .fold(T::zero(), |s, x| s + x)
            .sqrt();
        if alpha == T::zero() {
            e[k] = T::zero();
            continue;
        }
        let x0 = a[lo * n + k];
        let x0_abs = x0.norm();
        let ph = if x0_abs > T::zero() {
            x0 / x0_abs
        } else {
            Complex::new(T::one(), T::zero())
        };
        // v = x + e^{iθ}‖x‖ e₁, normalized.
        for i in lo..n {
            w[i] = a[i * n + k];
        }
        w[lo] += ph * alpha;
        let vnorm = (lo..n)
            .map(|i| w[i].norm_sqr())
            .fold(T::zero(), |s, x| s + x)
            .sqrt();
        for x in &mut w[lo..n] {
            *x /= vnorm;
        }

        // Trailing block B ← (I − 2ww†) B (I − 2ww†).
        for i in lo..n {
            let mut s = Complex::new(T::zero(), T::zero());
            for j in lo..n {
                s += a[i * n + j] * w[j];
            }
            p[i] = s;
        }
        let mut kappa = Complex::new(T::zero(), T::zero());
        for i in lo..n {
            kappa += w[i].conj() * p[i];
        }
        for i in lo..n {
            p[i] -= w[i] * kappa;
        }
        let two = T::lit(2.0);
        for i in lo..n {
            for j in lo..n {
                let upd = (w[i] * p[j].conj() + p[i] * w[j].conj()) * two;
                a[i * n + j] -= upd;
            }
        }
        let new_sub = -ph * alpha;
        a[lo * n + k] = new_sub;
        a[k * n + lo] = new_sub.conj();
        for i in (lo + 1)..n {
            a[i * n + k] = Complex::new(T::zero(), T::zero());
            a[k * n + i] = Complex::new(T::zero(), T::zero());
        }
        e[k] = alpha;
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + (n - 2)].norm();
    }
    e[n - 1] = T::zero();
    let d = (0..n).map(|i| a[i * n + i].re).collect();
    (d, e)
}

/// Implicit QL on a symmetric tridiagonal matrix; `e[i]` couples `i` and `i+1`.
fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Singular values (descending) of a row-major `rows × cols` matrix.
///
/// One-sided Jacobi on the columns of the wider orientation; small singular
/// values come out with absolute accuracy near `ε·‖M‖`, which the Schmidt-rank
/// test depends on.
pub fn singular_values<T: Real>(m: &[Complex<T>], rows: usize, cols: usize) -> Result<Vec<T>> {
    assert_eq!(m.len(), rows * cols, "matrix storage does not match shape");
    // Work with `count` column vectors, no more than their length.
    let (count, col): (usize, Vec<Vec<Complex<T>>>) = if rows >= cols {
        (
            cols,
            (0..cols)
                .map(|j| (0..rows).map(|i| m[i * cols + j]).collect())
                .collect(),
        )
    } else {
        (
            rows,
            (0..rows)
                .map(|i| (0..cols).map(|j| m[i * cols + j].conj()).collect())
                .collect(),
        )
    };
    let mut col = col;
    let eps = T::epsilon();

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..count {
            for q in (p + 1)..count {
                let mut alpha = T::zero();
                let mut beta = T::zero();
                let mut gamma = Complex::new(T::zero(), T::zero());
                let (head, tail) = col.split_at_mut(q);
                let (cp, cq) = (&mut head[p], &mut tail[0]);
                for (x, y) in cp.iter().zip(cq.iter()) {
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * *y;
                }
                let g = gamma.norm();
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Remove the phase of γ, then a real Jacobi rotation.
                let ph = gamma / g;
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let t = if zeta == T::zero() { T::one() } else { t };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let xp = *x;
                    let xq = *y * ph.conj();
                    *x = xp * cs - xq * sn;
                    *y = (xp * sn + xq * cs) * ph;
                }
            }
        }
        if !rotated {
            let mut sv: Vec<T> = col
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|z| z.norm_sqr())
                        .fold(T::zero(), |s, x| s + x)
                        .sqrt()
                })
                .collect();
            sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
            return Ok(sv);
        }
    }
    Err(Error::NoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cm(rows: &[&[(f64, f64)]]) -> (Vec<Complex64>, usize) {
        let n = rows.len();
        let v = rows
            .iter()
            .flat_map(|r| r.iter().map(|&(a, b)| Complex64::new(a, b)))
            .collect();
        (v, n)
    }

    #[test]
    fn pauli_y_spectrum() {
        let (m, n) = cm(&[&[(0., 0.), (0., -1.)], &[(0., 1.), (0., 0.)]]);
        let ev = hermitian_eigenvalues(&m, n).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_3x3_against_trace_and_known_roots() {
        // [[2, i, 0], [-i, 2, 0], [0, 0, 5]] has eigenvalues 1, 3, 5.
        let (m, n) = cm(&[
            &[(2., 0.), (0., 1.), (0., 0.)],
            &[(0., -1.), (2., 0.), (0., 0.)],
            &[(0., 0.), (0., 0.), (5., 0.)],
        ]);
        let ev = hermitian_eigenvalues(&m, n).unwrap();
        for (got, want) in ev.iter().zip([1.0, 3.0, 5.0]) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
    }

    #[test]
    fn degenerate_identity() {
        let n = 6;
        let mut m = vec![Complex64::new(0., 0.); n * n];
        for i in 0..n {
            m[i * n + i] = Complex64::new(1., 0.);
        }
        let ev = hermitian_eigenvalues(&m, n).unwrap();
        assert!(ev.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn singular_values_rank_one() {
        // outer product (1, 2i) ⊗ (3, 4): single nonzero singular value √5·5.
        let u = [Complex64::new(1., 0.), Complex64::new(0., 2.)];
        let v = [Complex64::new(3., 0.), Complex64::new(4., 0.)];
        let m: Vec<_> = u
            .iter()
            .flat_map(|a| v.iter().map(move |b| a * b))
            .collect();
        let sv = singular_values(&m, 2, 2).unwrap();
        assert!((sv[0] - 5f64.sqrt() * 5.0).abs() < 1e-13);
        assert!(sv[1].abs() < 1e-14);
    }

    #[test]
    fn singular_values_wide_matrix() {
        // diag(3, 1) padded with a zero column.
        let z = Complex64::new(0., 0.);
        let m = vec![Complex64::new(3., 0.), z, z, z, Complex64::new(0., 1.), z];
        let sv = singular_values(&m, 2, 3).unwrap();
        assert!((sv[0] - 3.0).abs() < 1e-14 && (sv[1] - 1.0).abs() < 1e-14);
    }
}
