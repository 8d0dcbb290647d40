//! Maximization of `|⟨Bell operator⟩|` over observable angles.
//!
//! A coarse pass (a regular grid of [`GRID_POINTS`] per dimension, or
//! [`RANDOM_SAMPLES`] seeded random points once the grid would exceed
//! [`GRID_CAP`] evaluations) ranks starting points; Nelder-Mead refines the
//! best `restarts` of them in parallel. Candidates are ranked by `|value|`,
//! ties broken by the lexicographically smallest settings vector, so results
//! are deterministic and non-decreasing in `restarts`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlators::{
    chsh_coherent, chsh_gisin, chsh_phi0_phase, chsh_phi0_polar, chsh_spin_j, chsh_squeezed,
    chsh_two_qubit, coherent_omega, mermin3_ghz, mermin4_ghz, AngleSet, CorrelatorReport,
    Inequality,
};
use crate::error::{invalid, Result};
use crate::observables::{wrap_angle, PolarSetting};
use crate::scalar::OPTIMIZER_TOL;
use crate::spin::Spin;

pub const GRID_POINTS: usize = 8;
pub const GRID_CAP: usize = 1_000_000;
pub const RANDOM_SAMPLES: usize = 1 << 16;
pub const MAX_ITERATIONS: usize = 2000;
pub const DEFAULT_RESTARTS: usize = 8;

/// How a flat settings vector maps onto observables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layout {
    /// `(x, x′)` phase pairs per party.
    Phases { parties: usize },
    /// `(θ, α, θ′, α′)` per party.
    Polar { parties: usize },
    /// Two parties, per-pair phases `(α₁…α_P, α′₁…, β₁…, β′₁…)`.
    PairPhases { pairs: usize },
}

/// Angle type of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    /// Periodic on `[0, 2π)`.
    Phase,
    /// Polar angle on `[0, π]`.
    Polar,
}

impl ParamKind {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            ParamKind::Phase => (0.0, TAU),
            ParamKind::Polar => (0.0, PI),
        }
    }
}

impl Layout {
    pub fn kinds(self) -> Vec<ParamKind> {
        match self {
            Layout::Phases { parties } => vec![ParamKind::Phase; 2 * parties],
            Layout::Polar { parties } => [ParamKind::Polar, ParamKind::Phase].repeat(2 * parties),
            Layout::PairPhases { pairs } => vec![ParamKind::Phase; 4 * pairs],
        }
    }

    pub fn dim(self) -> usize {
        self.kinds().len()
    }

    /// Phases into `[0, 2π)`; each `(θ, α)` onto `θ ∈ [0, π]` without moving
    /// the direction it encodes.
    pub fn canonicalize(self, x: &[f64]) -> Vec<f64> {
        match self {
            Layout::Polar { .. } => x
                .chunks(2)
                .flat_map(|p| {
                    let s = polar(p[0], p[1]);
                    [s.theta(), s.alpha()]
                })
                .collect(),
            _ => x.iter().map(|&a| wrap_angle(a)).collect(),
        }
    }

    pub fn angle_set(self, x: &[f64]) -> AngleSet {
        match self {
            Layout::Phases { .. } => AngleSet::phases(x),
            Layout::Polar { .. } => {
                let s: Vec<_> = x.chunks(2).map(|p| polar(p[0], p[1])).collect();
                AngleSet::polar(&s)
            }
            Layout::PairPhases { pairs } => {
                let c: Vec<&[f64]> = x.chunks(pairs).collect();
                AngleSet::pair_phases([c[0], c[1], c[2], c[3]])
            }
        }
    }
}

fn polar(theta: f64, alpha: f64) -> PolarSetting<f64> {
    PolarSetting::new(theta, alpha).expect("optimizer only produces finite angles")
}

fn polar4(x: &[f64]) -> [PolarSetting<f64>; 4] {
    [0, 1, 2, 3].map(|k| polar(x[2 * k], x[2 * k + 1]))
}

/// Signed correlator value as a function of the flat settings vector.
pub type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A named state family, observable family and angle domain.
#[derive(Clone)]
pub struct Scenario {
    name: String,
    inequality: Inequality,
    layout: Layout,
    state_parameters: BTreeMap<String, f64>,
    evaluator: Evaluator,
}

impl fmt::Debug for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scenario")
            .field("name", &self.name)
            .field("inequality", &self.inequality)
            .field("layout", &self.layout)
            .field("state_parameters", &self.state_parameters)
            .finish_non_exhaustive()
    }
}

/// Names accepted by [`Scenario::by_name`].
pub const SCENARIO_NAMES: [&str; 10] = [
    "phi0-phase",
    "phi0-polar",
    "gisin",
    "r-state",
    "product-polar",
    "spin",
    "coherent",
    "squeezed",
    "mermin3",
    "mermin4",
];

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        inequality: Inequality,
        layout: Layout,
        state_parameters: BTreeMap<String, f64>,
        evaluator: Evaluator,
    ) -> Result<Self> {
        let parties = match layout {
            Layout::Phases { parties } | Layout::Polar { parties } => parties,
            Layout::PairPhases { .. } => 2,
        };
        if layout.dim() == 0 {
            return Err(invalid("layout", "parameter domain is empty"));
        }
        if parties != inequality.parties() {
            return Err(invalid(
                "layout",
                format!(
                    "{parties} parties for an inequality on {}",
                    inequality.parties()
                ),
            ));
        }
        Ok(Self {
            name: name.into(),
            inequality,
            layout,
            state_parameters,
            evaluator,
        })
    }

    fn builtin(
        name: &str,
        inequality: Inequality,
        layout: Layout,
        params: &[(&str, f64)],
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let params = params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        Self::new(name, inequality, layout, params, Arc::new(f))
            .expect("built-in layouts are consistent")
    }

    /// `φ₀` with phase-flip observables.
    pub fn phi0_phase() -> Self {
        Self::builtin(
            "phi0-phase",
            Inequality::Chsh,
            Layout::Phases { parties: 2 },
            &[],
            |x| chsh_phi0_phase([x[0], x[1], x[2], x[3]]),
        )
    }

    /// `φ₀` with polar observables.
    pub fn phi0_polar() -> Self {
        Self::builtin(
            "phi0-polar",
            Inequality::Chsh,
            Layout::Polar { parties: 2 },
            &[],
            |x| chsh_phi0_polar(polar4(x)),
        )
    }

    /// `(|++⟩ + |+−⟩ + |−+⟩ + √(N−3)|−−⟩)/√N` with polar observables.
    pub fn gisin(n: u64) -> Result<Self> {
        chsh_gisin(n, polar4(&[0.0; 8]))?;
        Ok(Self::builtin(
            "gisin",
            Inequality::Chsh,
            Layout::Polar { parties: 2 },
            &[("N", n as f64)],
            move |x| chsh_gisin(n, polar4(x)).expect("N checked"),
        ))
    }

    /// `(|+−⟩ + r|−+⟩)/√(1+r²)` with polar observables.
    pub fn r_state(r: f64) -> Result<Self> {
        if !r.is_finite() {
            return Err(invalid("r", "must be finite"));
        }
        let n = (1.0 + r * r).sqrt();
        let psi = [0.0, 1.0 / n, r / n, 0.0].map(|v| Complex64::new(v, 0.0));
        Ok(Self::builtin(
            "r-state",
            Inequality::Chsh,
            Layout::Polar { parties: 2 },
            &[("r", r)],
            move |x| chsh_two_qubit(&psi, polar4(x)),
        ))
    }

    /// The product state `|+−⟩` with polar observables.
    pub fn product_polar() -> Self {
        let psi = [0.0, 1.0, 0.0, 0.0].map(|v| Complex64::new(v, 0.0));
        Self::builtin(
            "product-polar",
            Inequality::Chsh,
            Layout::Polar { parties: 2 },
            &[],
            move |x| chsh_two_qubit(&psi, polar4(x)),
        )
    }

    /// Spin-`j` singlet with one phase per `(m, −m)` pair.
    pub fn spin(j: Spin) -> Self {
        let pairs = j.pair_count();
        Self::builtin(
            "spin",
            Inequality::Chsh,
            Layout::PairPhases { pairs },
            &[("j", j.value())],
            move |x| {
                let c: Vec<&[f64]> = x.chunks(pairs).collect();
                chsh_spin_j(j, [c[0], c[1], c[2], c[3]]).expect("chunk sizes match pair count")
            },
        )
    }

    /// Entangled coherent state `N[|η⟩|σ⟩ + e^{iφ}|−η⟩|−σ⟩]` with Fock phase-flip observables.
    pub fn coherent(eta: f64, sigma: f64, phi: f64) -> Result<Self> {
        coherent_omega(eta, sigma, phi)?;
        Ok(Self::builtin(
            "coherent",
            Inequality::Chsh,
            Layout::Phases { parties: 2 },
            &[("eta", eta), ("sigma", sigma), ("phi", phi)],
            move |x| {
                chsh_coherent(eta, sigma, phi, [x[0], x[1], x[2], x[3]])
                    .expect("parameters checked")
            },
        ))
    }

    /// Two-mode squeezed state with Fock phase-flip observables.
    pub fn squeezed(lambda: f64) -> Result<Self> {
        chsh_squeezed(lambda, [0.0; 4])?;
        Ok(Self::builtin(
            "squeezed",
            Inequality::Chsh,
            Layout::Phases { parties: 2 },
            &[("lambda", lambda)],
            move |x| chsh_squeezed(lambda, [x[0], x[1], x[2], x[3]]).expect("lambda checked"),
        ))
    }

    pub fn mermin3() -> Self {
        Self::builtin(
            "mermin3",
            Inequality::Mermin3,
            Layout::Phases { parties: 3 },
            &[],
            |x| mermin3_ghz([x[0], x[1], x[2], x[3], x[4], x[5]]),
        )
    }

    pub fn mermin4() -> Self {
        Self::builtin(
            "mermin4",
            Inequality::Mermin4,
            Layout::Phases { parties: 4 },
            &[],
            |x| mermin4_ghz([x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7]]),
        )
    }

    /// Catalog lookup. `params` supplies the state parameters the scenario
    /// needs (`n`, `r`, `j`, `eta`/`sigma`/`phi`, `lambda`); extra keys are
    /// rejected.
    pub fn by_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let needed: &[&'static str] = match name {
            "gisin" => &["n"],
            "r-state" => &["r"],
            "spin" => &["j"],
            "coherent" => &["eta", "sigma", "phi"],
            "squeezed" => &["lambda"],
            _ if SCENARIO_NAMES.contains(&name) => &[],
            _ => {
                return Err(invalid(
                    "scenario",
                    format!(
                        "unknown scenario `{name}`; expected one of {}",
                        SCENARIO_NAMES.join(", ")
                    ),
                ))
            }
        };
        if let Some(extra) = params.keys().find(|k| !needed.contains(&k.as_str())) {
            return Err(invalid(
                "params",
                format!("`{extra}` is not a parameter of scenario `{name}`"),
            ));
        }
        let get = |key: &'static str| {
            params
                .get(key)
                .copied()
                .ok_or_else(|| invalid(key, format!("required by scenario `{name}`")))
        };
        match name {
            "phi0-phase" => Ok(Self::phi0_phase()),
            "phi0-polar" => Ok(Self::phi0_polar()),
            "gisin" => {
                let n = get("n")?;
                if !(n.fract() == 0.0 && n >= 3.0 && n <= u64::MAX as f64) {
                    return Err(invalid("n", format!("{n} is not an integer of at least 3")));
                }
                Self::gisin(n as u64)
            }
            "r-state" => Self::r_state(get("r")?),
            "product-polar" => Ok(Self::product_polar()),
            "spin" => Ok(Self::spin(get("j")?.to_string().parse()?)),
            "coherent" => Self::coherent(get("eta")?, get("sigma")?, get("phi")?),
            "squeezed" => Self::squeezed(get("lambda")?),
            "mermin3" => Ok(Self::mermin3()),
            _ => Ok(Self::mermin4()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inequality(&self) -> Inequality {
        self.inequality
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn state_parameters(&self) -> &BTreeMap<String, f64> {
        &self.state_parameters
    }

    pub fn domain(&self) -> Vec<(f64, f64)> {
        self.layout
            .kinds()
            .into_iter()
            .map(ParamKind::bounds)
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// Signed value at `x`; `x` must have [`Scenario::dim`] entries.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(
            x.len(),
            self.dim(),
            "settings length does not match scenario"
        );
        (self.evaluator)(x)
    }

    pub fn report(&self, x: &[f64]) -> CorrelatorReport {
        CorrelatorReport::new(self.inequality, self.evaluate(x), self.layout.angle_set(x))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// Largest `|value|` found.
    pub best_value: f64,
    /// The signed value at `best_settings`.
    pub signed_value: f64,
    pub best_settings: Vec<f64>,
    pub evaluations: u64,
    pub converged: bool,
}

struct Candidate {
    abs: f64,
    x: Vec<f64>,
    evaluations: u64,
    converged: bool,
}

fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    b.abs.total_cmp(&a.abs).then_with(|| lex(&a.x, &b.x))
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(p, q)| p.total_cmp(q))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn coarse_points(s: &Scenario, seed: u64) -> Vec<Vec<f64>> {
    let kinds = s.layout.kinds();
    let d = kinds.len();
    let grid_size = (GRID_POINTS as u64).checked_pow(d as u32);
    match grid_size {
        Some(total) if total <= GRID_CAP as u64 => (0..total as usize)
            .map(|mut idx| {
                kinds
                    .iter()
                    .map(|k| {
                        let i = idx % GRID_POINTS;
                        idx /= GRID_POINTS;
                        let (lo, hi) = k.bounds();
                        lo + (hi - lo) * i as f64 / GRID_POINTS as f64
                    })
                    .collect()
            })
            .collect(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..RANDOM_SAMPLES)
                .map(|_| {
                    kinds
                        .iter()
                        .map(|k| {
                            let (lo, hi) = k.bounds();
                            rng.random_range(lo..hi)
                        })
                        .collect()
                })
                .collect()
        }
    }
}

/// Nelder-Mead minimization of `g` from `x0` with initial edge `step`.
///
/// Returns the best vertex, its value, the evaluation count and whether the
/// spread of values across the simplex fell below `tol`.
pub fn nelder_mead(
    g: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, u64, bool) {
    let d = x0.len();
    let mut evals = 0u64;
    let mut eval = |x: &[f64]| {
        evals += 1;
        g(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| lex(&a.0, &b.0)))
    };
    let mut converged = false;
    for _ in 0..max_iter {
        order(&mut simplex);
        if simplex[d].1 - simplex[0].1 <= tol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|k| simplex[..d].iter().map(|v| v.0[k]).sum::<f64>() / d as f64)
            .collect();
        let worst = simplex[d].clone();
        let along = |t: f64| -> Vec<f64> {
            (0..d)
                .map(|k| centroid[k] + t * (worst.0[k] - centroid[k]))
                .collect()
        };
        let xr = along(-1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = eval(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[d] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = (0..d).map(|k| best[k] + 0.5 * (v.0[k] - best[k])).collect();
                    let f = eval(&x);
                    *v = (x, f);
                }
            }
        }
    }
    order(&mut simplex);
    let (x, f) = simplex.swap_remove(0);
    (x, f, evals, converged)
}

fn refine(s: &Scenario, x0: &[f64]) -> Candidate {
    let g = |x: &[f64]| -s.evaluate(x).abs();
    let step = PI / GRID_POINTS as f64;
    let (x1, _, e1, _) = nelder_mead(g, x0, step, OPTIMIZER_TOL, MAX_ITERATIONS);
    // A fresh, smaller simplex guards against collapse onto a ridge.
    let (x2, _, e2, converged) = nelder_mead(g, &x1, step / 16.0, OPTIMIZER_TOL, MAX_ITERATIONS);
    let x = s.layout.canonicalize(&x2);
    Candidate {
        abs: s.evaluate(&x).abs(),
        x,
        evaluations: e1 + e2 + 1,
        converged,
    }
}

/// Largest `|value|` over the scenario's domain.
///
/// `restarts = 0` returns the best coarse point unrefined. The seed only
/// drives the random coarse pass used for high-dimensional domains.
pub fn maximize_violation(s: &Scenario, restarts: usize, seed: u64) -> OptimizationResult {
    let points = coarse_points(s, seed);
    let coarse_evals = points.len() as u64;
    let mut coarse: Vec<Candidate> = points
        .into_par_iter()
        .map(|x| Candidate {
            abs: s.evaluate(&x).abs(),
            x,
            evaluations: 0,
            converged: false,
        })
        .collect();
    coarse.sort_by(rank);

    let refined: Vec<Candidate> = coarse
        .par_iter()
        .take(restarts)
        .map(|c| refine(s, &c.x))
        .collect();
    let refine_evals: u64 = refined.iter().map(|c| c.evaluations).sum();

    let mut pool = refined;
    pool.push(coarse.swap_remove(0));
    pool.sort_by(rank);
    let best = pool.swap_remove(0);
    OptimizationResult {
        best_value: best.abs,
        signed_value: s.evaluate(&best.x),
        best_settings: best.x,
        evaluations: coarse_evals + refine_evals,
        converged: best.converged,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GisinRow {
    pub n: u64,
    pub max_value: f64,
    pub result: OptimizationResult,
}

/// Maximal CHSH violation for each `N` of the Gisin family.
pub fn table_gisin(ns: &[u64], restarts: usize, seed: u64) -> Result<Vec<GisinRow>> {
    ns.iter()
        .map(|&n| {
            let result = maximize_violation(&Scenario::gisin(n)?, restarts, seed);
            Ok(GisinRow {
                n,
                max_value: result.best_value,
                result,
            })
        })
        .collect()
}
