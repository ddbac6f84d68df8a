//! Subcommand bodies. Each returns records in grid order; grid points are
//! evaluated on the given pool.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use rayon::ThreadPool;
use renyi_converse_core::converse::{optimize_alpha, ConverseBoundResult, ConverseProblem, SearchConfig, TheoremId};
use renyi_converse_core::entanglement::RreeConfig;
use renyi_converse_core::entropy::{coherent_information_renyi, renyi_entropy, renyi_relative};
use renyi_converse_core::propcheck::{CheckId, CheckReport};
use renyi_converse_core::protocols::{
    concentrate_simulate, schumacher_exact_small, schumacher_mass, ConfrontReport, ProtocolRunResult,
};
use renyi_converse_core::qstate::random::{random_density, random_pure};
use renyi_converse_core::qstate::{BipartiteSplit, DensityMatrix, Preset, PureState, QuantumState, SubsystemDims};
use renyi_converse_core::Error;
use serde::Serialize;

use crate::cli::{ProtocolArg, RateArgs, StateArgs};
use crate::error::CliError;
use crate::format::{self, Register, WitnessTerm};
use crate::grid::{parse_f64_grid, parse_u64_grid};
use crate::output::{ConverseRecord, EntropyRecord, Num, ProtocolRecord, RreeRecord};
use crate::parallel::{self, map_ordered};

const GRID_FIX: &str = "write a number, a list A,B,... or a range start:stop:step";

fn f64_grid(s: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    parse_f64_grid(s, flag).map_err(|m| CliError::Usage(format!("{m}\n  fix: {GRID_FIX}")))
}

fn u64_grid(s: &str, flag: &str) -> Result<Vec<u64>, CliError> {
    parse_u64_grid(s, flag).map_err(|m| CliError::Usage(format!("{m}\n  fix: {GRID_FIX}")))
}

fn labels(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|l| !l.is_empty()).collect()
}

fn register_label(i: usize) -> String {
    match i {
        0 => "A".into(),
        1 => "B".into(),
        2 => "R".into(),
        _ => format!("X{}", i + 1),
    }
}

/// `2x3` → registers `A:2, B:3`.
pub fn parse_dims(s: &str) -> Result<SubsystemDims, CliError> {
    let sizes = s
        .split('x')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&d| d > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| CliError::usage("--dims", format!("`{s}` is not a list of sizes"), "write sizes joined by x, e.g. 2x3"))?;
    Ok(SubsystemDims::new(sizes.into_iter().enumerate().map(|(i, d)| (register_label(i), d)))?)
}

pub fn load_state(args: &StateArgs, seed: u64) -> Result<QuantumState, CliError> {
    if let Some(path) = &args.state {
        return format::read_state(path);
    }
    if let Some(name) = &args.preset {
        return Ok(name.parse::<Preset>()?.build()?);
    }
    let dims = parse_dims(&args.dims)?;
    if args.rank == 1 {
        Ok(random_pure(dims, seed).into())
    } else {
        Ok(random_density(dims, args.rank, seed)?.into())
    }
}

fn load_sigma(file: Option<PathBuf>, preset: Option<String>) -> Result<Option<DensityMatrix>, CliError> {
    Ok(match (file, preset) {
        (Some(p), _) => Some(format::read_state(&p)?.density()),
        (None, Some(name)) => Some(
            name.parse::<Preset>()
                .and_then(|p| p.build())
                .map_err(|e| CliError::usage("--sigma-preset", e, "use a preset name such as werner(0.5)"))?
                .density(),
        ),
        (None, None) => None,
    })
}

fn require_pure(state: &QuantumState, theorem: &str) -> Result<PureState, CliError> {
    state.as_pure().cloned().ok_or_else(|| {
        CliError::usage(
            "--state/--preset",
            format!("{theorem} needs a pure state"),
            "pass a pure preset such as schmidt(0.8,0.2), or --rank 1",
        )
    })
}

/// Spectrum of the source: the A marginal, or the whole state if it has a
/// single register.
fn source(state: &QuantumState) -> Result<DensityMatrix, CliError> {
    let rho = state.density();
    if rho.dims().len() == 1 {
        Ok(rho)
    } else {
        Ok(rho.partial_trace(&["A"])?)
    }
}

fn spectrum(rho: &DensityMatrix) -> Vec<f64> {
    rho.eigenvalues().iter().map(|&x| x.max(0.0)).collect()
}

/// Orders outside a measure's domain give an empty cell.
fn where_defined(r: renyi_converse_core::Result<f64>) -> Result<Option<Num>, CliError> {
    match r {
        Ok(v) => Ok(Some(Num(v))),
        Err(Error::AlphaOutOfRange { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn entropy(
    pool: &ThreadPool,
    state: &StateArgs,
    seed: u64,
    alpha: &str,
    register: &str,
    sigma_state: Option<PathBuf>,
    sigma_preset: Option<String>,
) -> Result<Vec<EntropyRecord>, CliError> {
    let alphas = f64_grid(alpha, "--alpha")?;
    let rho = load_state(state, seed)?.density();
    let keep = labels(register);
    let marginal = rho.partial_trace(&keep)?;
    let split = (keep.len() < rho.dims().len()).then(|| BipartiteSplit::new(rho.dims(), &keep)).transpose()?;
    let sigma = load_sigma(sigma_state, sigma_preset)?;
    if let Some(s) = &sigma {
        if s.dims() != rho.dims() {
            return Err(CliError::usage(
                "--sigma-state/--sigma-preset",
                format!("registers {} do not match the state's {}", s.dims(), rho.dims()),
                "give sigma the same registers and sizes as the state",
            ));
        }
    }
    let name = keep.join(",");
    pool.install(|| {
        map_ordered(&alphas, |&a| {
            let coherent = |s: &BipartiteSplit| where_defined(coherent_information_renyi(&rho, s, a));
            Ok(EntropyRecord {
                alpha: Num(a),
                register: name.clone(),
                entropy: Num(renyi_entropy(&marginal, a)?),
                coherent_info_ab: split.as_ref().map(coherent).transpose()?.flatten(),
                coherent_info_ba: split.as_ref().map(|s| coherent(&s.swapped())).transpose()?.flatten(),
                relative_entropy: match &sigma {
                    Some(s) => where_defined(renyi_relative(&rho, s, a).map(|v| v.value()))?,
                    None => None,
                },
            })
        })
    })
    .into_iter()
    .collect()
}

pub struct RreeOptions {
    pub terms: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub witness_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Witness {
    alpha: f64,
    left: Vec<Register>,
    right: Vec<Register>,
    terms: Vec<WitnessTerm>,
}

fn registers(dims: &SubsystemDims) -> Vec<Register> {
    dims.factors().iter().map(|(label, dim)| Register { label: label.clone(), dim: *dim }).collect()
}

pub fn rree(
    pool: &ThreadPool,
    state: &StateArgs,
    seed: u64,
    alpha: &str,
    split: &str,
    opts: &RreeOptions,
) -> Result<Vec<RreeRecord>, CliError> {
    let alphas = f64_grid(alpha, "--alpha")?;
    let rho = load_state(state, seed)?.density();
    let split = BipartiteSplit::new(rho.dims(), &labels(split))?;
    let config = RreeConfig {
        terms_count: opts.terms,
        restarts: opts.restarts,
        max_iters: opts.max_iters,
        seed,
        ..RreeConfig::default()
    };
    let estimates = pool
        .install(|| map_ordered(&alphas, |&a| parallel::rree_estimate(&rho, &split, a, &config)))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = &opts.witness_out {
        let witnesses: Vec<Witness> = estimates
            .iter()
            .map(|e| Witness {
                alpha: e.alpha.alpha(),
                left: registers(e.witness.left_dims()),
                right: registers(e.witness.right_dims()),
                terms: format::witness_terms(&e.witness),
            })
            .collect();
        let mut bytes = serde_json::to_vec_pretty(&witnesses)?;
        bytes.push(b'\n');
        fs::write(path, bytes)?;
    }
    Ok(estimates
        .iter()
        .map(|e| RreeRecord {
            alpha: e.alpha.alpha(),
            lower: Num(e.analytic_lower),
            analytic_upper: e.analytic_upper,
            estimate: Num(e.upper_estimate),
            weak_regime: e.weak_regime,
            iterations: e.optimizer_trace.last().map_or(0, |t| t.0),
        })
        .collect())
}

/// `(logK, logL)`-style resource sizes of one grid point.
#[derive(Debug, Clone, Copy)]
struct Point {
    n: u64,
    log: f64,
    log_l: f64,
}

fn rate_points(theorem: TheoremId, ns: &[u64], rates: &RateArgs) -> Result<Vec<Point>, CliError> {
    let allowed: &[&str] = match theorem {
        TheoremId::MergeEnt => &["--logK", "--logL"],
        TheoremId::MergeCc => &["--logX"],
        TheoremId::Concentrate => &["--logL"],
        TheoremId::Schumacher => &["--logB"],
    };
    let given: Vec<(&str, &String)> = [
        ("--logK", &rates.log_k),
        ("--logL", &rates.log_l),
        ("--logX", &rates.log_x),
        ("--logB", &rates.log_b),
    ]
    .into_iter()
    .filter_map(|(f, v)| v.as_ref().map(|v| (f, v)))
    .collect();
    if let Some((flag, _)) = given.iter().find(|(f, _)| !allowed.contains(f)) {
        return Err(CliError::usage(flag, format!("not a resource of {theorem}"), &format!("use --rate or {}", allowed.join(" / "))));
    }
    let mut points = Vec::new();
    match (&rates.rate, given.is_empty()) {
        (Some(r), true) => {
            let rs = f64_grid(r, "--rate")?;
            for &n in ns {
                for &rate in &rs {
                    points.push(Point { n, log: n as f64 * rate, log_l: 0.0 });
                }
            }
        }
        (None, false) => {
            let grid = |flag: &str, v: &Option<String>, default: &str| f64_grid(v.as_deref().unwrap_or(default), flag);
            let (primary, secondary) = match theorem {
                TheoremId::MergeEnt => (grid("--logK", &rates.log_k, "0")?, grid("--logL", &rates.log_l, "0")?),
                TheoremId::MergeCc => (grid("--logX", &rates.log_x, "0")?, vec![0.0]),
                TheoremId::Concentrate => (grid("--logL", &rates.log_l, "0")?, vec![0.0]),
                TheoremId::Schumacher => (grid("--logB", &rates.log_b, "0")?, vec![0.0]),
            };
            for &n in ns {
                for &log in &primary {
                    for &log_l in &secondary {
                        points.push(Point { n, log, log_l });
                    }
                }
            }
        }
        (Some(_), false) => {
            return Err(CliError::usage("--rate", "given together with a log flag", "pass either --rate or the log flags"))
        }
        (None, true) => {
            return Err(CliError::usage("--rate", "no resource size given", &format!("pass --rate R or {}", allowed.join(" / "))))
        }
    }
    Ok(points)
}

/// The state a theorem reads: a pure state, or the source spectrum.
enum Input {
    Pure(PureState),
    Spectrum(Vec<f64>),
}

impl Input {
    fn new(theorem: TheoremId, state: &QuantumState) -> Result<Self, CliError> {
        Ok(match theorem {
            TheoremId::Schumacher => Input::Spectrum(spectrum(&source(state)?)),
            _ => Input::Pure(require_pure(state, theorem.name())?),
        })
    }

    fn problem(&self, theorem: TheoremId, p: Point) -> renyi_converse_core::Result<ConverseProblem> {
        match (self, theorem) {
            (Input::Pure(psi), TheoremId::MergeEnt) => ConverseProblem::merge_ent(psi, p.n, p.log, p.log_l),
            (Input::Pure(psi), TheoremId::MergeCc) => ConverseProblem::merge_cc(psi, p.n, p.log),
            (Input::Pure(psi), TheoremId::Concentrate) => ConverseProblem::concentrate(psi, p.n, p.log),
            (Input::Spectrum(s), _) => ConverseProblem::schumacher_spectrum(s.clone(), p.n, p.log),
            (Input::Pure(_), TheoremId::Schumacher) => unreachable!("schumacher reads a spectrum"),
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn converse(
    pool: &ThreadPool,
    theorem: TheoremId,
    state: &StateArgs,
    seed: u64,
    n: &str,
    alpha: Option<&str>,
    optimize: bool,
    rates: &RateArgs,
) -> Result<Vec<ConverseRecord>, CliError> {
    let ns = u64_grid(n, "--n")?;
    let alphas = match (alpha, optimize) {
        (Some(a), _) => Some(f64_grid(a, "--alpha")?),
        (None, true) => None,
        (None, false) => {
            return Err(CliError::usage("--alpha", "no order given", "pass --alpha A|RANGE or --optimize-alpha"));
        }
    };
    let points = rate_points(theorem, &ns, rates)?;
    let input = Input::new(theorem, &load_state(state, seed)?)?;
    let results = pool.install(|| {
        map_ordered(&points, |&p| -> renyi_converse_core::Result<Vec<ConverseBoundResult>> {
            let problem = input.problem(theorem, p)?;
            match &alphas {
                Some(a) => a.iter().map(|&a| problem.evaluate(a)).collect(),
                None => Ok(vec![optimize_alpha(&problem, &SearchConfig::default())?]),
            }
        })
    });
    let mut records = Vec::new();
    for r in results {
        records.extend(r?.iter().map(ConverseRecord::from));
    }
    Ok(records)
}

fn simulate_points(
    pool: &ThreadPool,
    protocol: ProtocolArg,
    state: &QuantumState,
    grid: &[(u64, f64)],
    exact: bool,
) -> Result<Vec<ProtocolRunResult>, CliError> {
    let runs = match protocol {
        ProtocolArg::Schumacher => {
            let rho = source(state)?;
            let lambda = spectrum(&rho);
            pool.install(|| {
                map_ordered(grid, |&(n, r)| {
                    if exact {
                        schumacher_exact_small(&rho, n, r)
                    } else {
                        schumacher_mass(&lambda, n, r)
                    }
                })
            })
        }
        ProtocolArg::Concentrate => {
            if exact {
                return Err(CliError::usage("--exact", "only Schumacher has a dense evaluation", "drop --exact"));
            }
            let psi = require_pure(state, "concentrate")?;
            let probs = spectrum(&psi.marginal(&["A"])?);
            pool.install(|| map_ordered(grid, |&(n, r)| concentrate_simulate(&probs, n, n as f64 * r)))
        }
    };
    Ok(runs.into_iter().collect::<Result<Vec<_>, _>>()?)
}

fn grid_2d(n: &str, rate: &str) -> Result<Vec<(u64, f64)>, CliError> {
    let ns = u64_grid(n, "--n")?;
    let rates = f64_grid(rate, "--rate")?;
    Ok(ns.iter().flat_map(|&n| rates.iter().map(move |&r| (n, r))).collect())
}

pub fn simulate(
    pool: &ThreadPool,
    protocol: ProtocolArg,
    state: &StateArgs,
    seed: u64,
    n: &str,
    rate: &str,
    exact: bool,
) -> Result<Vec<ProtocolRecord>, CliError> {
    let grid = grid_2d(n, rate)?;
    let state = load_state(state, seed)?;
    let runs = simulate_points(pool, protocol, &state, &grid, exact)?;
    Ok(runs.iter().map(ProtocolRecord::from).collect())
}

/// Simulates where a protocol exists and bounds each point at the resource
/// size the protocol actually used.
pub fn confront(
    pool: &ThreadPool,
    theorem: TheoremId,
    state: &StateArgs,
    seed: u64,
    n: &str,
    rate: &str,
    alpha: Option<f64>,
) -> Result<ConfrontReport, CliError> {
    let grid = grid_2d(n, rate)?;
    let state = load_state(state, seed)?;
    let input = Input::new(theorem, &state)?;
    let protocol = match theorem {
        TheoremId::Schumacher => Some(ProtocolArg::Schumacher),
        TheoremId::Concentrate => Some(ProtocolArg::Concentrate),
        TheoremId::MergeEnt | TheoremId::MergeCc => None,
    };
    let runs = match protocol {
        Some(p) => simulate_points(pool, p, &state, &grid, false)?,
        None => Vec::new(),
    };
    let points: Vec<Point> = match protocol {
        Some(_) => runs.iter().map(|r| Point { n: r.n, log: r.log_size, log_l: 0.0 }).collect(),
        None => grid.iter().map(|&(n, r)| Point { n, log: n as f64 * r, log_l: 0.0 }).collect(),
    };
    let bounds = pool
        .install(|| {
            map_ordered(&points, |&p| {
                let problem = input.problem(theorem, p)?;
                match alpha {
                    Some(a) => problem.evaluate(a),
                    None => optimize_alpha(&problem, &SearchConfig::default()),
                }
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConfrontReport::new(theorem, &runs, bounds)?)
}

pub fn check(pool: &ThreadPool, ids: &[String], trials: Option<usize>, seed: u64) -> Result<Vec<CheckReport>, CliError> {
    let checks = if ids.is_empty() {
        CheckId::ALL.to_vec()
    } else {
        ids.iter()
            .map(|s| {
                s.parse::<CheckId>().map_err(|e| {
                    let names: Vec<&str> = CheckId::ALL.iter().map(|c| c.name()).collect();
                    CliError::usage("check", e, &format!("choose from {}", names.join(", ")))
                })
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut reports = Vec::with_capacity(checks.len());
    for id in checks {
        let n = trials.unwrap_or_else(|| id.default_trials());
        reports.push(pool.install(|| parallel::run_check(id, n, seed))?);
    }
    Ok(reports)
}

pub fn write_check_summary(reports: &[CheckReport], w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "{:<18} {:>7} {:>14} {:>9}  status", "check", "trials", "worst_margin", "failures")?;
    for r in reports {
        let status = match (r.ok(), r.check_id.expects_failure()) {
            (true, true) => "ok (failed as expected)",
            (true, false) => "ok",
            (false, _) => "FAIL",
        };
        writeln!(
            w,
            "{:<18} {:>7} {:>14.3e} {:>9}  {status}",
            r.check_id.name(),
            r.trials,
            r.worst_margin,
            r.failures.len()
        )?;
    }
    Ok(())
}
