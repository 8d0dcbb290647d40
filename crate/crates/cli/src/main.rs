//! `bell`: evaluate Bell-CHSH and Mermin scenarios from the command line.

mod report;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use bell_core::correlators::{chsh_two_qubit, correlator_spin_j};
use bell_core::lhv::tsirelson_settings;
use bell_core::optimizer::DEFAULT_RESTARTS;
use bell_core::{
    bell_state, chsh_coherent, chsh_lhv, chsh_operator, chsh_squeezed, entangled_coherent,
    expectation, lhv, maximize_violation, optimizer, phase_flip_observable, squeezed_state,
    AngleSet, BellIndex, Error, FockCutoff, Inequality, Layout, PairingScheme, PhaseSetting,
    PolarSetting, PolarSettingF64, Scenario, ShiftedSignModel, SignModel, Spin, StateVectorF64,
    UnitVector, C64,
};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use report::{report, Format, Report};

const STANDARD: [f64; 4] = [0.0, FRAC_PI_2, -FRAC_PI_4, FRAC_PI_4];
const M3_ANGLES: [f64; 6] = [0.0, FRAC_PI_2, -FRAC_PI_4, FRAC_PI_4, -FRAC_PI_4, FRAC_PI_4];
const M4_UNPRIMED: f64 = PI / 16.0;

#[derive(Parser, Debug)]
#[command(name = "bell", version, about = "Bell-CHSH and Mermin correlators")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; inferred from the --out extension when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Decimal places in every reported number.
    #[arg(long, global = true, default_value_t = 5, value_parser = clap::value_parser!(u8).range(0..=15))]
    precision: u8,

    /// Seed for the optimizer's random pass and the hidden-variable simulation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Maximize |value| over the settings instead of using the default angles.
    #[arg(long, global = true)]
    optimize: bool,

    /// Nelder-Mead restarts used by the optimizer.
    #[arg(long, global = true, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// CHSH on a two-qubit Bell state.
    Chsh {
        /// Bell state index.
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=3))]
        bell: u8,
        /// Use polar observables; angles are then (θ, α) per observable.
        #[arg(long)]
        polar: bool,
        /// Comma-separated angles ordered A, A', B, B'.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
    },
    /// Maximal CHSH violation across the N-state family.
    Gisin {
        /// Comma-separated N values, each at least 3.
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_n)]
        n_list: Vec<u64>,
    },
    /// CHSH on the spin-j singlet with one phase per (m, -m) pair.
    Spin {
        /// Spin, e.g. 1, 3/2 or 2.5.
        #[arg(long, value_parser = parse_spin)]
        j: Spin,
        /// Comma-separated phases: all pairs of A, then A', B, B'.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
    },
    /// CHSH on the entangled coherent state N[|η⟩|σ⟩ + e^{iφ}|−η⟩|−σ⟩].
    Coherent {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_finite)]
        eta: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_finite)]
        sigma: f64,
        #[arg(long, default_value_t = PI, allow_hyphen_values = true, value_parser = parse_finite)]
        phi: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
        /// Evaluate on a truncated Fock space with this many levels per mode
        /// instead of the series.
        #[arg(long, value_parser = parse_cutoff)]
        cutoff: Option<FockCutoff>,
    },
    /// CHSH on the two-mode squeezed state.
    Squeezed {
        /// Squeezing parameter in the open interval (0, 1).
        #[arg(long, value_parser = parse_lambda)]
        lambda: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
        /// Evaluate on a truncated Fock space with this many levels per mode.
        #[arg(long, value_parser = parse_cutoff)]
        cutoff: Option<FockCutoff>,
    },
    /// Mermin inequality on the GHZ state.
    Mermin {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(3..=4))]
        parties: u8,
        /// Comma-separated phases ordered A, A', B, B', ...
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
    },
    /// Monte-Carlo CHSH of a local hidden-variable model.
    Lhv {
        #[arg(long, value_enum, default_value_t = Model::Sign)]
        model: Model,
        /// Threshold of the shifted model, |shift| < 1.
        #[arg(long, default_value_t = 0.3, allow_hyphen_values = true, value_parser = parse_shift)]
        shift: f64,
        #[arg(long, default_value_t = lhv::DEFAULT_SAMPLES, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Comma-separated (θ, φ) directions ordered a, a', b, b'.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
    },
    /// Maximize a catalog scenario.
    Optimize {
        /// Catalog scenario to maximize
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(optimizer::SCENARIO_NAMES))]
        scenario: String,
        /// Family size N (gisin)
        #[arg(long, value_parser = parse_n)]
        n: Option<u64>,
        /// Amplitude ratio r (r-state)
        #[arg(long, allow_hyphen_values = true, value_parser = parse_finite)]
        r: Option<f64>,
        /// Spin, e.g. 1 or 3/2 (spin)
        #[arg(long, value_parser = parse_spin)]
        j: Option<Spin>,
        /// First-mode amplitude (coherent)
        #[arg(long, allow_hyphen_values = true, value_parser = parse_finite)]
        eta: Option<f64>,
        /// Second-mode amplitude (coherent)
        #[arg(long, allow_hyphen_values = true, value_parser = parse_finite)]
        sigma: Option<f64>,
        /// Relative phase (coherent)
        #[arg(long, allow_hyphen_values = true, value_parser = parse_finite)]
        phi: Option<f64>,
        /// Squeezing parameter in (0, 1) (squeezed)
        #[arg(long, value_parser = parse_lambda)]
        lambda: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Sign,
    Shifted,
}

fn parse_finite(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err("expected a finite number".into()),
    }
}

fn parse_lambda(s: &str) -> Result<f64, String> {
    let x = parse_finite(s)?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err("must lie in the open interval (0, 1)".into())
    }
}

fn parse_shift(s: &str) -> Result<f64, String> {
    let x = parse_finite(s)?;
    if x.abs() < 1.0 {
        Ok(x)
    } else {
        Err("must lie in the open interval (-1, 1)".into())
    }
}

fn parse_n(s: &str) -> Result<u64, String> {
    match s.trim().parse::<u64>() {
        Ok(n) if n >= 3 => Ok(n),
        _ => Err("expected an integer N >= 3".into()),
    }
}

fn parse_spin(s: &str) -> Result<Spin, String> {
    s.parse::<Spin>()
        .map_err(|_| "expected a positive integer or half-integer such as 1, 3/2 or 2.5".into())
}

fn parse_cutoff(s: &str) -> Result<FockCutoff, String> {
    let n: usize = s
        .parse()
        .map_err(|_| "expected a positive even level count".to_string())?;
    FockCutoff::new(n).map_err(|_| "expected a positive even level count".into())
}

/// Errors that end a run: usage problems exit with 2, numeric guards with 1.
enum Failure {
    Usage(ErrorKind, String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(ErrorKind::ValueValidation, msg.into())
}

fn expect_angles(
    given: Option<Vec<f64>>,
    flag: &str,
    default: Vec<f64>,
) -> Result<Vec<f64>, Failure> {
    match given {
        None => Ok(default),
        Some(v) if v.len() == default.len() && v.iter().all(|x| x.is_finite()) => Ok(v),
        Some(v) => Err(usage(format!(
            "invalid value for '{flag}': expected {} finite comma-separated angles, got {}",
            default.len(),
            v.len()
        ))),
    }
}

fn polar4(x: &[f64]) -> [PolarSettingF64; 4] {
    [0, 1, 2, 3].map(|k| PolarSetting::new(x[2 * k], x[2 * k + 1]).expect("finite angles"))
}

struct Ctx {
    precision: usize,
    seed: u64,
    optimize: bool,
    restarts: usize,
}

impl Ctx {
    fn optimized(&self, s: &Scenario) -> Report {
        let r = maximize_violation(s, self.restarts, self.seed);
        let params: Vec<(&str, f64)> = s
            .state_parameters()
            .iter()
            .map(|(k, v)| (k.as_str(), *v))
            .collect();
        Report::new(
            s.name(),
            &params,
            s.report(&r.best_settings),
            self.precision,
        )
        .with_diagnostics(
            &[
                ("evaluations", r.evaluations as f64),
                ("converged", f64::from(u8::from(r.converged))),
            ],
            self.precision,
        )
    }
}

fn run_chsh(
    ctx: &Ctx,
    bell: u8,
    polar: bool,
    angles: Option<Vec<f64>>,
) -> Result<Vec<Report>, Failure> {
    let psi = bell_state::<f64>(BellIndex::new(bell)?);
    let amps: [C64; 4] = psi.amplitudes().try_into().expect("two qubits");
    let name = format!("bell{bell}-{}", if polar { "polar" } else { "phase" });
    let params = [("bell", f64::from(bell))];
    let equator = |a: f64| PolarSetting::new(FRAC_PI_2, a).expect("finite angle");

    if ctx.optimize {
        let scenario = match (bell, polar) {
            (0, false) => Scenario::phi0_phase(),
            (0, true) => Scenario::phi0_polar(),
            _ => {
                let layout = if polar {
                    Layout::Polar { parties: 2 }
                } else {
                    Layout::Phases { parties: 2 }
                };
                let eval: optimizer::Evaluator = if polar {
                    Arc::new(move |x: &[f64]| chsh_two_qubit(&amps, polar4(x)))
                } else {
                    Arc::new(move |x: &[f64]| {
                        chsh_two_qubit(&amps, [0, 1, 2, 3].map(|k| equator(x[k])))
                    })
                };
                Scenario::new(
                    name,
                    Inequality::Chsh,
                    layout,
                    BTreeMap::from([("bell".into(), f64::from(bell))]),
                    eval,
                )?
            }
        };
        return Ok(vec![ctx.optimized(&scenario)]);
    }

    let (value, settings) = if polar {
        let default = STANDARD.iter().flat_map(|&a| [FRAC_PI_2, a]).collect();
        let x = expect_angles(angles, "--angles", default)?;
        let s = polar4(&x);
        (chsh_two_qubit(&amps, s), AngleSet::polar(&s))
    } else {
        let x = expect_angles(angles, "--angles", STANDARD.to_vec())?;
        let s = [0, 1, 2, 3].map(|k| equator(x[k]));
        (chsh_two_qubit(&amps, s), AngleSet::phases(&x))
    };
    Ok(vec![report(
        &name,
        Inequality::Chsh,
        &params,
        value,
        settings,
        ctx.precision,
    )])
}

fn run_spin(ctx: &Ctx, j: Spin, angles: Option<Vec<f64>>) -> Result<Vec<Report>, Failure> {
    if ctx.optimize {
        return Ok(vec![ctx.optimized(&Scenario::spin(j))]);
    }
    let pairs = j.pair_count();
    // The spin correlator depends on α − β, with an overall (−1)^{2j}.
    let b = if j.is_integer() {
        FRAC_PI_4
    } else {
        PI + FRAC_PI_4
    };
    let per_pair = [0.0, FRAC_PI_2, b, b - FRAC_PI_2];
    let default = per_pair
        .iter()
        .flat_map(|&a| std::iter::repeat_n(a, pairs))
        .collect();
    let x = expect_angles(angles, "--angles", default)?;
    let c: Vec<&[f64]> = x.chunks(pairs).collect();
    let lists = [c[0], c[1], c[2], c[3]];
    let e = |p: usize, q: usize| correlator_spin_j(j, lists[p], lists[q]);
    let value = e(0, 2)? + e(1, 2)? + e(0, 3)? - e(1, 3)?;
    let settings = AngleSet::pair_phases(lists);
    Ok(vec![report(
        "spin",
        Inequality::Chsh,
        &[("j", j.value())],
        value,
        settings,
        ctx.precision,
    )])
}

fn fock_chsh(psi: &StateVectorF64, cut: FockCutoff, x: &[f64]) -> Result<f64, Failure> {
    let scheme = PairingScheme::fock(cut);
    let o: Vec<_> = x
        .iter()
        .map(|&a| phase_flip_observable(PhaseSetting::new(a).expect("finite"), &scheme))
        .collect();
    let c = chsh_operator(&o[0], &o[1], &o[2], &o[3])?;
    Ok(expectation(&c, psi)?.re)
}

fn run_coherent(
    ctx: &Ctx,
    (eta, sigma, phi): (f64, f64, f64),
    angles: Option<Vec<f64>>,
    cutoff: Option<FockCutoff>,
) -> Result<Vec<Report>, Failure> {
    let scenario = Scenario::coherent(eta, sigma, phi)?;
    if ctx.optimize {
        return Ok(vec![ctx.optimized(&scenario)]);
    }
    let default = if phi.cos() < 0.0 {
        vec![0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4]
    } else {
        STANDARD.to_vec()
    };
    let x = expect_angles(angles, "--angles", default)?;
    let mut params = vec![("eta", eta), ("sigma", sigma), ("phi", phi)];
    let value = match cutoff {
        Some(cut) => {
            params.push(("cutoff", cut.levels() as f64));
            fock_chsh(&entangled_coherent(eta, sigma, phi, cut)?, cut, &x)?
        }
        None => chsh_coherent(eta, sigma, phi, [x[0], x[1], x[2], x[3]])?,
    };
    Ok(vec![report(
        "coherent",
        Inequality::Chsh,
        &params,
        value,
        AngleSet::phases(&x),
        ctx.precision,
    )])
}

fn run_squeezed(
    ctx: &Ctx,
    lambda: f64,
    angles: Option<Vec<f64>>,
    cutoff: Option<FockCutoff>,
) -> Result<Vec<Report>, Failure> {
    let scenario = Scenario::squeezed(lambda)?;
    if ctx.optimize {
        return Ok(vec![ctx.optimized(&scenario)]);
    }
    let x = expect_angles(angles, "--angles", STANDARD.to_vec())?;
    let mut params = vec![("lambda", lambda)];
    let value = match cutoff {
        Some(cut) => {
            params.push(("cutoff", cut.levels() as f64));
            fock_chsh(&squeezed_state(lambda, cut)?, cut, &x)?
        }
        None => chsh_squeezed(lambda, [x[0], x[1], x[2], x[3]])?,
    };
    Ok(vec![report(
        "squeezed",
        Inequality::Chsh,
        &params,
        value,
        AngleSet::phases(&x),
        ctx.precision,
    )])
}

fn run_mermin(ctx: &Ctx, parties: u8, angles: Option<Vec<f64>>) -> Result<Vec<Report>, Failure> {
    let scenario = if parties == 3 {
        Scenario::mermin3()
    } else {
        Scenario::mermin4()
    };
    if ctx.optimize {
        return Ok(vec![ctx.optimized(&scenario)]);
    }
    let default = if parties == 3 {
        M3_ANGLES.to_vec()
    } else {
        [M4_UNPRIMED, M4_UNPRIMED + FRAC_PI_2].repeat(4)
    };
    let x = expect_angles(angles, "--angles", default)?;
    let r = scenario.report(&x);
    Ok(vec![Report::new(scenario.name(), &[], r, ctx.precision)])
}

fn run_lhv(
    ctx: &Ctx,
    model: Model,
    shift: f64,
    samples: u64,
    angles: Option<Vec<f64>>,
) -> Result<Vec<Report>, Failure> {
    let dirs = match angles {
        None => tsirelson_settings(),
        Some(_) => {
            let x = expect_angles(angles, "--angles", vec![0.0; 8])?;
            [0, 1, 2, 3].map(|k| UnitVector::from_polar(x[2 * k], x[2 * k + 1]))
        }
    };
    let (name, chsh, mut params) = match model {
        Model::Sign => (
            "lhv-sign",
            chsh_lhv(&SignModel, &dirs, samples, ctx.seed)?,
            vec![],
        ),
        Model::Shifted => (
            "lhv-shifted",
            chsh_lhv(&ShiftedSignModel::new(shift)?, &dirs, samples, ctx.seed)?,
            vec![("shift", shift)],
        ),
    };
    params.push(("samples", samples as f64));
    params.push(("seed", ctx.seed as f64));
    let polar = dirs.map(|d| {
        let [x, y, z] = d.get();
        PolarSetting::new(z.clamp(-1.0, 1.0).acos(), y.atan2(x)).expect("unit vector")
    });
    let r = report(
        name,
        Inequality::Chsh,
        &params,
        chsh.estimate.mean,
        AngleSet::polar(&polar),
        ctx.precision,
    );
    Ok(vec![r.with_diagnostics(
        &[
            ("std_error", chsh.estimate.std_error),
            ("square_defects", chsh.square_defects as f64),
            ("quantum_reference", lhv::quantum_chsh(&dirs)),
        ],
        ctx.precision,
    )])
}

fn run(cli: Cli) -> Result<Vec<Report>, Failure> {
    let ctx = Ctx {
        precision: usize::from(cli.precision),
        seed: cli.seed,
        optimize: cli.optimize,
        restarts: cli.restarts,
    };
    match cli.command {
        Command::Chsh {
            bell,
            polar,
            angles,
        } => run_chsh(&ctx, bell, polar, angles),
        Command::Gisin { n_list } => n_list
            .iter()
            .map(|&n| Ok(ctx.optimized(&Scenario::gisin(n)?)))
            .collect(),
        Command::Spin { j, angles } => run_spin(&ctx, j, angles),
        Command::Coherent {
            eta,
            sigma,
            phi,
            angles,
            cutoff,
        } => run_coherent(&ctx, (eta, sigma, phi), angles, cutoff),
        Command::Squeezed {
            lambda,
            angles,
            cutoff,
        } => run_squeezed(&ctx, lambda, angles, cutoff),
        Command::Mermin { parties, angles } => run_mermin(&ctx, parties, angles),
        Command::Lhv {
            model,
            shift,
            samples,
            angles,
        } => run_lhv(&ctx, model, shift, samples, angles),
        Command::Optimize {
            scenario,
            n,
            r,
            j,
            eta,
            sigma,
            phi,
            lambda,
        } => {
            let given = [
                ("n", n.map(|v| v as f64)),
                ("r", r),
                ("j", j.map(Spin::value)),
                ("eta", eta),
                ("sigma", sigma),
                ("phi", phi),
                ("lambda", lambda),
            ];
            let params: BTreeMap<String, f64> = given
                .iter()
                .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
                .collect();
            let s = Scenario::by_name(&scenario, &params).map_err(|e| match e {
                Error::InvalidParameter { name, reason } if reason.starts_with("required") => {
                    Failure::Usage(
                        ErrorKind::MissingRequiredArgument,
                        format!("the argument '--{name}' is {reason}"),
                    )
                }
                Error::InvalidParameter {
                    name: "params",
                    reason,
                } => Failure::Usage(
                    ErrorKind::ArgumentConflict,
                    format!("{reason} (remove that flag)"),
                ),
                other => Failure::from(other),
            })?;
            Ok(vec![ctx.optimized(&s)])
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli
        .format
        .or_else(|| cli.out.as_deref().and_then(Format::from_extension))
        .unwrap_or(Format::Text);
    let precision = usize::from(cli.precision);
    let out = cli.out.clone();

    let reports = match run(cli) {
        Ok(r) => r,
        Err(Failure::Usage(kind, msg)) => Cli::command().error(kind, msg).exit(),
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let text = match report::render(&reports, format, precision) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: could not serialize report: {e}");
            return ExitCode::from(1);
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
