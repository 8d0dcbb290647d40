//! Bell-CHSH and Mermin inequalities on dense finite-dimensional Hilbert spaces.
//!
//! States, observables and closed-form correlators are generic over the
//! scalar type ([`Real`], implemented for `f32` and `f64`). The optimizer, the
//! hidden-variable simulation and all reports work in `f64`.
//!
//! ```
//! use bell_core::{chsh_operator, phase_flip_observable, bell_state, expectation};
//! use bell_core::{BellIndex, PairingScheme, PhaseSetting};
//! use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
//!
//! let q = PairingScheme::qubit();
//! let obs = |a: f64| phase_flip_observable(PhaseSetting::new(a).unwrap(), &q);
//! let c = chsh_operator(&obs(0.0), &obs(FRAC_PI_2), &obs(-FRAC_PI_4), &obs(FRAC_PI_4)).unwrap();
//! let phi0 = bell_state::<f64>(BellIndex::new(0).unwrap());
//! let v = expectation(&c, &phi0).unwrap().re;
//! assert!((v - 2.0 * SQRT_2).abs() < 1e-12);
//! ```

pub mod correlators;
pub mod error;
pub mod lhv;
pub mod linalg;
pub mod observables;
pub mod optimizer;
pub mod scalar;
pub mod spin;
pub mod states;
pub mod tensor;

pub use correlators::{
    chsh_coherent, chsh_coherent_leading, chsh_gisin, chsh_phi0_phase, chsh_phi0_polar, chsh_spin1,
    chsh_spin_j, chsh_squeezed, chsh_two_qubit, coherent_delta, coherent_omega, generic_correlator,
    mermin3_ghz, mermin4_ghz, AngleSet, CorrelatorReport, Inequality, Setting,
};
pub use error::{Error, Result};
pub use lhv::{
    chsh_lhv, estimate_e, ChshLhv, LhvEstimate, LhvModel, ShiftedSignModel, SignModel, UnitVector,
};
pub use observables::{
    annihilation, chsh_operator, mermin3_operator, mermin4_operator, pauli, phase_flip_observable,
    phase_flip_per_pair, polar_observable, pseudospin_operators, spin_matrices, PairingScheme,
    PhaseSetting, PolarSetting,
};
pub use optimizer::{
    maximize_violation, table_gisin, GisinRow, Layout, OptimizationResult, Scenario,
};
pub use scalar::Real;
pub use spin::Spin;
pub use states::{
    bell_state, cat_state, cat_state_pair, coherent_state, entangled_coherent, ghz_state,
    gisin_family_state, is_product, r_state, spin_singlet, squeezed_state, symmetric_coherent,
    BellIndex, CatParity, FockCutoff, ProductTest,
};
pub use tensor::{
    commutator, expectation, operator_norm, tensor_op, tensor_ops, tensor_state, DenseOperator,
    StateVector,
};

pub type C64 = num_complex::Complex64;
pub type C32 = num_complex::Complex32;
pub type StateVectorF64 = StateVector<f64>;
pub type StateVectorF32 = StateVector<f32>;
pub type DenseOperatorF64 = DenseOperator<f64>;
pub type DenseOperatorF32 = DenseOperator<f32>;
pub type PhaseSettingF64 = PhaseSetting<f64>;
pub type PolarSettingF64 = PolarSetting<f64>;
