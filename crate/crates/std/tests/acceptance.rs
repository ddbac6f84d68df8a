//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always reach the terminal; exits nonzero if any
//! criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use renyi_converse_std::parallel;
use renyi_converse_core::converse::{optimize_alpha, ConverseProblem, SearchConfig, TheoremId};
use renyi_converse_core::entanglement::{rree_bounds_pure, RreeConfig};
use renyi_converse_core::entropy::{relative_entropy, renyi_entropy, renyi_relative, von_neumann};
use renyi_converse_core::propcheck::CheckId;
use renyi_converse_core::protocols::{concentrate_simulate, confront_bounds, schumacher_mass, ProtocolRunResult};
use renyi_converse_core::qstate::random::{random_density, random_probabilities, random_pure, rng};
use renyi_converse_core::qstate::{BipartiteSplit, PureState, SubsystemDims};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit: u64) -> bool {
    elapsed < Duration::from_secs(limit)
}

fn sandwich_on_maximal_entanglement() -> Outcome {
    let start = Instant::now();
    let mut worst_bound: f64 = 0.0;
    let mut worst_estimate: f64 = 0.0;
    for k in 2..=4usize {
        let psi = PureState::maximally_entangled(k).unwrap();
        let rho = psi.density();
        let split = BipartiteSplit::new(rho.dims(), &["A"]).unwrap();
        let log_k = (k as f64).log2();
        for alpha in [1.25, 1.5, 2.0] {
            let (lo, up) = rree_bounds_pure(&psi, &split, alpha).unwrap();
            let est = parallel::rree_estimate(&rho, &split, alpha, &RreeConfig::default()).unwrap();
            for b in [lo, up, est.analytic_lower] {
                worst_bound = worst_bound.max((b - log_k).abs());
            }
            worst_estimate = worst_estimate.max((est.upper_estimate - log_k).abs());
        }
    }
    let t = start.elapsed();
    outcome(
        worst_bound <= 1e-9 && worst_estimate <= 1e-4 && within(t, 60),
        format!("max |bound - log K| = {worst_bound:.2e}, max |estimate - log K| = {worst_estimate:.2e}, {t:.1?}"),
    )
}

fn sandwich_on_random_pure_states() -> Outcome {
    let shapes = [(2, 2), (2, 3), (3, 3)];
    let mut violations = 0;
    let mut worst_low = f64::INFINITY;
    let mut worst_high = f64::INFINITY;
    for i in 0..100u64 {
        let (da, db) = shapes[i as usize % 3];
        let psi = random_pure(SubsystemDims::ab(da, db).unwrap(), 1000 + i);
        let rho = psi.density();
        let split = BipartiteSplit::new(rho.dims(), &["A"]).unwrap();
        for alpha in [1.25, 1.5, 2.0] {
            let (lo, up) = rree_bounds_pure(&psi, &split, alpha).unwrap();
            let config = RreeConfig { seed: i, ..RreeConfig::default() };
            let est = parallel::rree_estimate(&rho, &split, alpha, &config).unwrap().upper_estimate;
            worst_low = worst_low.min(est - lo);
            worst_high = worst_high.min(up + 1e-6 - est);
            if est < lo - 1e-9 || est > up + 1e-6 {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("{violations} violations in 300; min(estimate - lower) = {worst_low:.2e}, min(upper + 1e-6 - estimate) = {worst_high:.2e}"),
    )
}

fn audit(ids: &[(CheckId, usize)], limit: Option<u64>) -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for &(id, trials) in ids {
        let r = parallel::run_check(id, trials, 0).unwrap();
        pass &= r.failures.is_empty() && r.worst_margin >= -1e-9;
        parts.push(format!("{id}[{trials}] worst {:.2e}", r.worst_margin));
    }
    let t = start.elapsed();
    if let Some(limit) = limit {
        pass &= within(t, limit);
    }
    outcome(pass, format!("{}, {t:.1?}", parts.join(", ")))
}

/// Confronts simulator runs with the optimized bound at their integer sizes.
fn confront(theorem: TheoremId, runs: &[ProtocolRunResult], problem: impl Fn(&ProtocolRunResult) -> ConverseProblem) -> (bool, usize) {
    let bounds = runs.iter().map(|r| optimize_alpha(&problem(r), &SearchConfig::default()).unwrap()).collect();
    match confront_bounds(theorem, runs, bounds) {
        Ok(report) => (true, report.rows.len()),
        Err(_) => (false, runs.len()),
    }
}

fn schumacher_crossover() -> Outcome {
    let start = Instant::now();
    let lambda = [0.9, 0.1];
    let runs: Vec<_> = (1..=20).map(|i| schumacher_mass(&lambda, 10 * i, 0.3).unwrap()).collect();
    let (no_violation, rows) = confront(TheoremId::Schumacher, &runs, |r| {
        ConverseProblem::schumacher_spectrum(lambda.to_vec(), r.n, r.log_size).unwrap()
    });
    let low = runs.last().unwrap().fidelity_lower;
    let high = schumacher_mass(&lambda, 400, 0.6).unwrap().fidelity_lower;
    let t = start.elapsed();
    outcome(
        no_violation && low <= 0.05 && high >= 0.99 && within(t, 60),
        format!(
            "R=0.3: bound holds on {rows}/20 points: {no_violation}; sqrt(eta) at n=200 = {low:.4} (needs <= 0.05: {}); \
             R=0.6: sqrt(eta) at n=400 = {high:.5} (needs >= 0.99); {t:.1?}",
            low <= 0.05
        ),
    )
}

fn concentration_crossover() -> Outcome {
    let start = Instant::now();
    let probs = [0.8, 0.2];
    let psi = PureState::schmidt_form(&probs).unwrap();
    let runs: Vec<_> = (1..=10).map(|i| concentrate_simulate(&probs, 20 * i, 0.9 * (20 * i) as f64).unwrap()).collect();
    let (no_violation, rows) =
        confront(TheoremId::Concentrate, &runs, |r| ConverseProblem::concentrate(&psi, r.n, r.log_size).unwrap());
    let at_200 = runs.last().unwrap().fidelity_lower;
    let success = concentrate_simulate(&probs, 500, 0.6 * 500.0).unwrap().success_prob.unwrap();
    let t = start.elapsed();
    outcome(
        no_violation && at_200 <= 0.01 && success >= 0.99 && within(t, 60),
        format!(
            "rate 0.9: bound holds on {rows}/10 points: {no_violation}; F at n=200 = {at_200:.3e}; \
             rate 0.6: success at n=500 = {success:.5}; {t:.1?}"
        ),
    )
}

fn merging_worked_case() -> Outcome {
    let phi = PureState::maximally_entangled(2).unwrap().relabeled(&[("B", "R")]).unwrap();
    let zero = PureState::basis(SubsystemDims::single("B", 2).unwrap(), 0).unwrap();
    let psi = phi.tensor(&zero).permuted(&["A", "B", "R"]).unwrap();
    let ent = ConverseProblem::merge_ent(&psi, 1, 0.5, 0.0).unwrap().evaluate(2.0).unwrap().exponent_per_copy;
    let cc = ConverseProblem::merge_cc(&psi, 1, 1.0).unwrap().evaluate(0.75).unwrap().exponent_per_copy;
    outcome(
        (ent + 0.125).abs() <= 1e-12 && (cc + 1.0 / 12.0).abs() <= 1e-12,
        format!("merge_ent = {ent}, merge_cc = {cc}"),
    )
}

fn continuity_at_one() -> Outcome {
    const EPS: f64 = 1e-5;
    let mut worst: f64 = 0.0;
    for i in 0..50u64 {
        let rate = 0.05 + 0.9 * i as f64 / 50.0;
        let tri = random_pure(SubsystemDims::new([("A", 2), ("B", 2), ("R", 2)]).unwrap(), i);
        let bi = random_pure(SubsystemDims::ab(2, 3).unwrap(), 100 + i);
        let spectrum = random_probabilities(3, &mut rng(200 + i));
        let problems = [
            ConverseProblem::merge_ent(&tri, 1, rate, 0.0).unwrap(),
            ConverseProblem::merge_cc(&tri, 1, rate).unwrap(),
            ConverseProblem::concentrate(&bi, 1, rate).unwrap(),
            ConverseProblem::schumacher_spectrum(spectrum, 1, rate).unwrap(),
        ];
        for p in &problems {
            let limit = p.limit_bracket();
            for a in [1.0 - EPS, 1.0 + EPS] {
                worst = worst.max((p.bracket(a) - limit).abs());
            }
        }
        let dims = SubsystemDims::single("A", 3).unwrap();
        let rho = random_density(dims.clone(), 1 + i as usize % 3, 300 + i).unwrap();
        let sigma = random_density(dims, 3, 400 + i).unwrap();
        let s = von_neumann(&rho);
        let d = relative_entropy(&rho, &sigma).unwrap().value();
        for a in [1.0 - EPS, 1.0 + EPS] {
            worst = worst.max((renyi_entropy(&rho, a).unwrap() - s).abs());
            worst = worst.max((renyi_relative(&rho, &sigma, a).unwrap().value() - d).abs());
        }
    }
    outcome(worst <= 1e-4, format!("max deviation at alpha = 1 +- 1e-5: {worst:.2e}"))
}

fn cli_is_deterministic() -> Outcome {
    let sweeps: [&[&str]; 5] = [
        &["converse", "schumacher", "--n", "10:200:10", "--rate", "0.1:0.9:0.1", "--optimize-alpha", "--format", "csv"],
        &["converse", "merge-cc", "--dims", "2x2x2", "--seed", "11", "--n", "1:5:1", "--rate", "0.2,0.7", "--alpha", "0.55:0.95:0.1"],
        &["rree", "--dims", "2x2", "--rank", "3", "--seed", "5", "--alpha", "1.1:2:0.3", "--max-iters", "60"],
        &["confront", "concentrate", "--preset", "schmidt(0.8,0.2)", "--n", "20:200:20", "--rate", "0.6,0.9"],
        &["check", "dpi", "lemma4", "--trials", "12", "--seed", "3"],
    ];
    let bin = env!("CARGO_BIN_EXE_renyi-converse");
    let mut differing = Vec::new();
    for args in sweeps {
        let outputs: Vec<Vec<u8>> = ["1", "2", "4"]
            .iter()
            .map(|jobs| Command::new(bin).args(args).args(["--jobs", jobs]).output().unwrap().stdout)
            .collect();
        if outputs[0].is_empty() || outputs.iter().any(|o| o != &outputs[0]) {
            differing.push(args[0]);
        }
    }
    outcome(differing.is_empty(), format!("{} sweeps at --jobs 1, 2, 4; differing: {differing:?}", sweeps.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 sandwich exactness on maximal entanglement", sandwich_on_maximal_entanglement),
        ("2 pure-state sandwich on 100 random states", sandwich_on_random_pure_states),
        ("3 exact-inequality audits", || {
            audit(
                &[
                    (CheckId::Dpi, 500),
                    (CheckId::Vdh, 1000),
                    (CheckId::Lemma10, 500),
                    (CheckId::LemmaA1, 500),
                    (CheckId::FidelityProduct, 1000),
                ],
                Some(300),
            )
        }),
        ("4 coherent-information chain", || audit(&[(CheckId::Lemma5, 200)], None)),
        ("5 Schumacher crossover", schumacher_crossover),
        ("6 concentration crossover", concentration_crossover),
        ("7 merging worked case", merging_worked_case),
        ("8 continuity at alpha = 1", continuity_at_one),
        ("9 CLI determinism across --jobs", cli_is_deterministic),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let o = f();
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
