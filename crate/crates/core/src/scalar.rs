//! Scalar abstraction shared by every numerical module.
//!
//! All linear algebra, state constructors, observables and closed-form
//! correlators are written against [`Real`], so they run in `f32` or `f64`.
//! Tolerances scale with the precision of the scalar.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

pub trait Real:
    'static
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
{
    /// Normalization and Hermiticity checks at construction time.
    const CONSTRUCTION_TOL: f64;
    /// Agreement between two independent evaluation routes.
    const ORACLE_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn construction_tol() -> Self {
        Self::lit(Self::CONSTRUCTION_TOL)
    }

    #[inline]
    fn oracle_tol() -> Self {
        Self::lit(Self::ORACLE_TOL)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const CONSTRUCTION_TOL: f64 = 1e-12;
    const ORACLE_TOL: f64 = 1e-9;
}

impl Real for f32 {
    const CONSTRUCTION_TOL: f64 = 2e-5;
    const ORACLE_TOL: f64 = 1e-4;
}

/// Optimizer convergence threshold on the simplex spread.
pub const OPTIMIZER_TOL: f64 = 1e-10;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `e^{i x}`
#[inline]
pub(crate) fn phase<T: Real>(x: T) -> Complex<T> {
    Complex::new(x.cos(), x.sin())
}
