//! Randomized audits of the inequalities behind the converse bounds.
//!
//! Each check draws one random instance per trial from the seed
//! `derive_seed(seed, trial)` and reduces it to a margin that must be
//! nonnegative (LHS − RHS in the direction of the inequality). A margin of
//! `+∞` is a pass and is left out of `worst_margin`. Trials are independent,
//! so callers may evaluate them in any order and [`aggregate`] the results.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::entanglement::{lemma5_lower, rree_bounds_pure, rree_estimate, rree_lower, van_dam_hayden_gap, RreeConfig};
use crate::entropy::{coherent_information_renyi, renyi_entropy, renyi_relative, ExtendedReal};
use crate::linalg::{self, CMatrix};
use crate::numeric::derive_seed;
use crate::qstate::random::{
    random_channel_with, random_density_with, random_instrument, random_probabilities, random_pure_with, rng,
};
use crate::qstate::{fidelity, fidelity_with_pure, BipartiteSplit, DensityMatrix, SubsystemDims};
use crate::{Error, Result};

/// Tolerance for checks of exact formulas.
pub const EXACT_TOL: f64 = 1e-9;
/// Tolerance for checks that go through the RREE estimator.
pub const ESTIMATOR_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    /// Data processing for `S_α(ρ‖σ)`, `α ∈ [0, 2]`.
    Dpi,
    /// van Dam–Hayden: `S_α(ρ) ≥ S_β(σ) + (2α/(1−α)) log F`.
    Vdh,
    /// `log|X| ≥ S_α(RX) − S_α(R) ≥ 0` on cq states.
    Lemma10,
    /// `log|X| ≥ S_α(R) + I_α(X⟩R)` on cq states, `α ∈ (1, 2]`.
    LemmaA1,
    /// `F(ρ, τ⊗ρ_B) ≥ F(ρ, τ⊗σ)²`, also with `τ = ρ_A`.
    FidelityProduct,
    /// Pure-state sandwich around the RREE estimate.
    Lemma4,
    /// `I_α(A⟩B)_ρ ≥ (2α/(α−1)) log F + S_{1/(2−α)}(A)_ψ`.
    Lemma5,
    /// `Σ p_k E_lower(θ_k) ≤ E_upper(ρ)` under a unilocal instrument.
    Lemma3Surrogate,
    /// `E_lower(ℰ_B(ρ)) ≤ E_upper(ρ)` for a local channel.
    LoccSurrogate,
    /// Data processing with the inequality reversed; must fail.
    HarnessSelftest,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::Dpi,
        CheckId::Vdh,
        CheckId::Lemma10,
        CheckId::LemmaA1,
        CheckId::FidelityProduct,
        CheckId::Lemma4,
        CheckId::Lemma5,
        CheckId::Lemma3Surrogate,
        CheckId::LoccSurrogate,
        CheckId::HarnessSelftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Dpi => "dpi",
            CheckId::Vdh => "vdh",
            CheckId::Lemma10 => "lemma10",
            CheckId::LemmaA1 => "lemma_a1",
            CheckId::FidelityProduct => "fidelity_product",
            CheckId::Lemma4 => "lemma4",
            CheckId::Lemma5 => "lemma5",
            CheckId::Lemma3Surrogate => "lemma3_surrogate",
            CheckId::LoccSurrogate => "locc_surrogate",
            CheckId::HarnessSelftest => "harness_selftest",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            CheckId::Dpi | CheckId::Lemma10 | CheckId::LemmaA1 => 500,
            CheckId::Vdh | CheckId::FidelityProduct => 1000,
            CheckId::Lemma5 => 200,
            CheckId::Lemma4 => 100,
            CheckId::Lemma3Surrogate | CheckId::LoccSurrogate | CheckId::HarnessSelftest => 50,
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            CheckId::Lemma4 | CheckId::Lemma3Surrogate | CheckId::LoccSurrogate => ESTIMATOR_TOL,
            _ => EXACT_TOL,
        }
    }

    /// Whether a correct harness reports failures for this check.
    pub fn expects_failure(self) -> bool {
        self == CheckId::HarnessSelftest
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        CheckId::ALL
            .into_iter()
            .find(|c| c.name() == key || (key == "lemmaa1" && *c == CheckId::LemmaA1))
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("unknown check `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check_id: CheckId,
    pub trials: usize,
    /// Smallest finite margin; `+∞` when every trial was infinite.
    pub worst_margin: f64,
    /// `(trial seed, margin)` for every margin below `−tolerance`.
    pub failures: Vec<(u64, f64)>,
    pub tolerance: f64,
    pub seed: u64,
}

impl CheckReport {
    /// No failures, or failures for the self-test.
    pub fn ok(&self) -> bool {
        self.failures.is_empty() != self.check_id.expects_failure()
    }
}

/// Seed of trial `index` under the run seed `seed`.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    derive_seed(seed, index as u64)
}

/// Folds per-trial margins, in trial order, into a report.
pub fn aggregate(check_id: CheckId, seed: u64, margins: &[(u64, f64)]) -> CheckReport {
    let tolerance = check_id.tolerance();
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    for &(s, m) in margins {
        if m != f64::INFINITY {
            worst = worst.min(m);
        }
        if !(m >= -tolerance) {
            failures.push((s, m));
        }
    }
    CheckReport { check_id, trials: margins.len(), worst_margin: worst, failures, tolerance, seed }
}

/// Runs all trials in order.
pub fn run_check(check_id: CheckId, trials: usize, seed: u64) -> Result<CheckReport> {
    let mut margins = Vec::with_capacity(trials);
    for i in 0..trials {
        let s = trial_seed(seed, i);
        margins.push((s, trial_margin(check_id, s)?));
    }
    Ok(aggregate(check_id, seed, &margins))
}

pub fn check_dpi(trials: usize, seed: u64) -> Result<CheckReport> {
    run_check(CheckId::Dpi, trials, seed)
}

pub fn check_vdh(trials: usize, seed: u64) -> Result<CheckReport> {
    run_check(CheckId::Vdh, trials, seed)
}

pub fn check_lemma10(trials: usize, seed: u64) -> Result<CheckReport> {
    run_check(CheckId::Lemma10, trials, seed)
}

pub fn check_lemma_a1(trials: usize, seed: u64) -> Result<CheckReport> {
    run_check(CheckId::LemmaA1, trials, seed)
}

pub fn check_fidelity_product(trials: usize, seed: u64) -> Result<CheckReport> {
    run_check(CheckId::FidelityProduct, trials, seed)
}

pub fn check_lemma4(trials: usize, seed: u64) -> Result<CheckReport> {
    run_check(CheckId::Lemma4, trials, seed)
}

pub fn check_lemma5(trials: usize, seed: u64) -> Result<CheckReport> {
    run_check(CheckId::Lemma5, trials, seed)
}

pub fn check_lemma3_surrogate(trials: usize, seed: u64) -> Result<CheckReport> {
    run_check(CheckId::Lemma3Surrogate, trials, seed)
}

pub fn check_locc_surrogate(trials: usize, seed: u64) -> Result<CheckReport> {
    run_check(CheckId::LoccSurrogate, trials, seed)
}

/// The margin of one trial: the minimum over every inequality and order it
/// audits.
pub fn trial_margin(check_id: CheckId, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    match check_id {
        CheckId::Dpi => dpi_trial(&mut r),
        CheckId::Vdh => vdh_trial(&mut r),
        CheckId::Lemma10 => lemma10_trial(&mut r),
        CheckId::LemmaA1 => lemma_a1_trial(&mut r),
        CheckId::FidelityProduct => fidelity_product_trial(&mut r),
        CheckId::Lemma4 => lemma4_trial(&mut r),
        CheckId::Lemma5 => lemma5_trial(&mut r),
        CheckId::Lemma3Surrogate => lemma3_trial(&mut r),
        CheckId::LoccSurrogate => locc_trial(&mut r),
        CheckId::HarnessSelftest => selftest_trial(&mut r),
    }
}

const DPI_ORDERS: [f64; 11] = [0.0, 0.25, 0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5, 1.75, 2.0];
const CQ_ORDERS: [f64; 10] = [0.0, 0.25, 0.5, 0.75, 0.9, 1.1, 1.25, 1.5, 1.75, 2.0];
const VDH_ORDERS: [f64; 4] = [0.5, 0.6, 0.75, 0.9];
const HIGH_ORDERS: [f64; 3] = [1.25, 1.5, 2.0];

fn single(label: &str, d: usize) -> SubsystemDims {
    SubsystemDims::single(label, d).expect("positive dimension")
}

fn random_state(r: &mut ChaCha8Rng, dims: SubsystemDims) -> Result<DensityMatrix> {
    let rank = r.random_range(1..=dims.total_dim());
    random_density_with(dims, rank, r)
}

/// `a − b` with `+∞ − finite = +∞` and `finite − +∞ = −∞`.
fn gap(a: ExtendedReal, b: ExtendedReal) -> f64 {
    match (a, b) {
        (ExtendedReal::PosInfinity, _) => f64::INFINITY,
        (ExtendedReal::Finite(_), ExtendedReal::PosInfinity) => f64::NEG_INFINITY,
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => x - y,
    }
}

fn dpi_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let d_in = r.random_range(2..=4);
    let d_out = r.random_range(2..=4);
    let rho = random_state(r, single("A", d_in))?;
    let sigma = random_state(r, single("A", d_in))?;
    let kraus = r.random_range(d_in.div_ceil(d_out)..=3.max(d_in.div_ceil(d_out)));
    let channel = random_channel_with(single("A", d_in), single("B", d_out), kraus, r)?;
    let (out_rho, out_sigma) = (channel.apply(&rho)?, channel.apply(&sigma)?);
    let mut worst = f64::INFINITY;
    for alpha in DPI_ORDERS {
        let before = renyi_relative(&rho, &sigma, alpha)?;
        let after = renyi_relative(&out_rho, &out_sigma, alpha)?;
        worst = worst.min(gap(before, after));
    }
    Ok(worst)
}

fn vdh_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let d = r.random_range(2..=6);
    let rho = random_state(r, single("A", d))?;
    let sigma = random_state(r, single("A", d))?;
    let mut worst = f64::INFINITY;
    for alpha in VDH_ORDERS {
        worst = worst.min(van_dam_hayden_gap(&rho, &sigma, alpha)?);
    }
    Ok(worst)
}

/// `Σ_x p_x ρ_x ⊗ |x⟩⟨x|` on `R ⊗ X`.
fn random_cq(r: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    let d_r = r.random_range(2..=3);
    let d_x = if r.random_bool(0.1) { 1 } else { r.random_range(2..=4) };
    let p = random_probabilities(d_x, r);
    let shared = r.random_bool(0.15);
    let first = random_state(r, single("R", d_r))?;
    let mut m = CMatrix::zeros(d_r * d_x, d_r * d_x);
    for (x, &px) in p.iter().enumerate() {
        let rho_x = if shared || x == 0 { first.clone() } else { random_state(r, single("R", d_r))? };
        let mut ket = CMatrix::zeros(d_x, d_x);
        ket[(x, x)] = linalg::c(1.0, 0.0);
        m += linalg::kron(rho_x.matrix(), &ket).scale(px);
    }
    let dims = single("R", d_r).concat(&single("X", d_x));
    DensityMatrix::new(linalg::hermitize(&m), dims)
}

fn lemma10_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let rho = random_cq(r)?;
    let log_x = (rho.dims().dim_of("X")? as f64).log2();
    let rho_r = rho.partial_trace(&["R"])?;
    let mut worst = f64::INFINITY;
    for alpha in CQ_ORDERS {
        let diff = renyi_entropy(&rho, alpha)? - renyi_entropy(&rho_r, alpha)?;
        worst = worst.min(log_x - diff).min(diff);
    }
    Ok(worst)
}

fn lemma_a1_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let rho = random_cq(r)?;
    let log_x = (rho.dims().dim_of("X")? as f64).log2();
    let rho_r = rho.partial_trace(&["R"])?;
    let x_kept = BipartiteSplit::new(rho.dims(), &["X"])?;
    let mut worst = f64::INFINITY;
    for alpha in HIGH_ORDERS {
        // S_α(R|X) = −I_α(X⟩R)
        let conditional = -coherent_information_renyi(&rho, &x_kept, alpha)?;
        worst = worst.min(log_x - (renyi_entropy(&rho_r, alpha)? - conditional));
    }
    Ok(worst)
}

fn fidelity_product_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let d_b = r.random_range(2..=3);
    let dims = SubsystemDims::ab(2, d_b)?;
    let rho = random_state(r, dims)?;
    let tau = random_state(r, single("A", 2))?;
    let sigma = random_state(r, single("B", d_b))?;
    let rho_a = rho.partial_trace(&["A"])?;
    let rho_b = rho.partial_trace(&["B"])?;
    let general = fidelity(&rho, &tau.tensor(&rho_b))? - fidelity(&rho, &tau.tensor(&sigma))?.powi(2);
    let marginal = fidelity(&rho, &rho_a.tensor(&rho_b))? - fidelity(&rho, &rho_a.tensor(&sigma))?.powi(2);
    Ok(general.min(marginal))
}

fn random_split_dims(r: &mut ChaCha8Rng) -> SubsystemDims {
    let (d_a, d_b) = [(2, 2), (2, 3), (3, 3)][r.random_range(0..3)];
    SubsystemDims::ab(d_a, d_b).expect("positive dimensions")
}

fn estimator_config(r: &mut ChaCha8Rng) -> RreeConfig {
    RreeConfig { seed: r.random(), ..RreeConfig::default() }
}

fn lemma4_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let psi = random_pure_with(random_split_dims(r), r);
    let split = BipartiteSplit::new(psi.dims(), &["A"])?;
    let rho = psi.density();
    let config = estimator_config(r);
    let mut worst = f64::INFINITY;
    for alpha in HIGH_ORDERS {
        let (lower, upper) = rree_bounds_pure(&psi, &split, alpha)?;
        let est = rree_estimate(&rho, &split, alpha, &config)?.upper_estimate;
        worst = worst.min(est - lower).min(upper - est);
    }
    Ok(worst)
}

fn lemma5_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let dims = random_split_dims(r);
    let psi = random_pure_with(dims.clone(), r);
    let split = BipartiteSplit::new(&dims, &["A"])?;
    let noise = random_state(r, dims.clone())?;
    let t: f64 = r.random_range(0.0..0.5);
    let mixed = psi.density().matrix().scale(1.0 - t) + noise.matrix().scale(t);
    let rho = DensityMatrix::new(linalg::hermitize(&mixed), dims)?;
    let f = fidelity_with_pure(psi.amplitudes(), &rho)?;
    let mut worst = f64::INFINITY;
    for alpha in HIGH_ORDERS {
        let lhs = coherent_information_renyi(&rho, &split, alpha)?;
        worst = worst.min(lhs - lemma5_lower(&psi, &rho, &split, alpha, f)?);
    }
    Ok(worst)
}

fn lemma3_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let dims = SubsystemDims::ab(2, 2)?;
    let rho = random_state(r, dims.clone())?;
    let split = BipartiteSplit::new(&dims, &["A"])?;
    let per_branch = r.random_range(1..=2);
    let instrument = random_instrument(single("B", 2), 2, per_branch, r)?.on_register(&dims, "B")?;
    let outcomes = instrument.apply(&rho, 1e-12)?;
    let config = estimator_config(r);
    let mut worst = f64::INFINITY;
    for alpha in HIGH_ORDERS {
        let upper = rree_estimate(&rho, &split, alpha, &config)?.upper_estimate;
        let mut average = 0.0;
        for o in &outcomes {
            average += o.probability * rree_lower(&o.state, &split, alpha)?;
        }
        worst = worst.min(upper - average);
    }
    Ok(worst)
}

fn locc_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let dims = random_split_dims(r);
    let rho = random_state(r, dims.clone())?;
    let split = BipartiteSplit::new(&dims, &["A"])?;
    let d_b = dims.dim_of("B")?;
    let kraus = r.random_range(1..=3);
    let local = random_channel_with(single("B", d_b), single("B", d_b), kraus, r)?.on_register(&dims, "B")?;
    let out = local.apply(&rho)?;
    let config = estimator_config(r);
    let mut worst = f64::INFINITY;
    for alpha in HIGH_ORDERS {
        let upper = rree_estimate(&rho, &split, alpha, &config)?.upper_estimate;
        worst = worst.min(upper - rree_lower(&out, &split, alpha)?);
    }
    Ok(worst)
}

fn selftest_trial(r: &mut ChaCha8Rng) -> Result<f64> {
    let d = r.random_range(2..=4);
    let rho = random_density_with(single("A", d), d, r)?;
    let sigma = random_density_with(single("A", d), d, r)?;
    let channel = random_channel_with(single("A", d), single("B", 2), d, r)?;
    let before = renyi_relative(&rho, &sigma, 1.5)?;
    let after = renyi_relative(&channel.apply(&rho)?, &channel.apply(&sigma)?, 1.5)?;
    Ok(-gap(before, after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{PureState, QuantumChannel};

    #[test]
    fn identity_and_replacement_channels() {
        let mut r = rng(1);
        let rho = random_state(&mut r, single("A", 3)).unwrap();
        let sigma = random_density_with(single("A", 3), 3, &mut r).unwrap();
        let id = QuantumChannel::identity(single("A", 3));
        let tau = random_density_with(single("A", 2), 2, &mut r).unwrap();
        let replace = QuantumChannel::replacement(single("A", 3), &tau);
        for alpha in [0.5, 1.0, 1.5, 2.0] {
            let s = renyi_relative(&rho, &sigma, alpha).unwrap();
            let same = renyi_relative(&id.apply(&rho).unwrap(), &id.apply(&sigma).unwrap(), alpha).unwrap();
            assert!(gap(s, same).abs() < 1e-12);
            let zero = renyi_relative(&replace.apply(&rho).unwrap(), &replace.apply(&sigma).unwrap(), alpha).unwrap();
            assert!(zero.value().abs() < 1e-12);
        }
    }

    #[test]
    fn saturating_cq_state() {
        // uniform p, orthogonal pure ρ_x: both sides of the A1 inequality equal log|X|
        let dims = single("R", 3).concat(&single("X", 3));
        let rho = DensityMatrix::diagonal(dims, &[1.0 / 3.0, 0.0, 0.0, 0.0, 1.0 / 3.0, 0.0, 0.0, 0.0, 1.0 / 3.0]).unwrap();
        let split = BipartiteSplit::new(rho.dims(), &["X"]).unwrap();
        for alpha in HIGH_ORDERS {
            let cond = -coherent_information_renyi(&rho, &split, alpha).unwrap();
            let s_r = renyi_entropy(&rho.partial_trace(&["R"]).unwrap(), alpha).unwrap();
            assert!(cond.abs() < 1e-12 && (s_r - 3f64.log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn fidelity_product_at_product_state() {
        let a = random_density_with(single("A", 2), 2, &mut rng(3)).unwrap();
        let b = random_density_with(single("B", 3), 3, &mut rng(4)).unwrap();
        let rho = a.tensor(&b);
        assert!((fidelity(&rho, &a.tensor(&b)).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lemma5_saturates_at_pure_point() {
        let psi = PureState::maximally_entangled(2).unwrap();
        let split = BipartiteSplit::new(psi.dims(), &["A"]).unwrap();
        let rho = psi.density();
        for alpha in HIGH_ORDERS {
            let lhs = coherent_information_renyi(&rho, &split, alpha).unwrap();
            let rhs = lemma5_lower(&psi, &rho, &split, alpha, 1.0).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_checks_pass_briefly() {
        for id in [CheckId::Dpi, CheckId::Vdh, CheckId::Lemma10, CheckId::LemmaA1, CheckId::FidelityProduct, CheckId::Lemma5] {
            let report = run_check(id, 40, 9).unwrap();
            assert!(report.ok(), "{id}: {report:?}");
            assert!(report.worst_margin >= -EXACT_TOL);
        }
    }

    #[test]
    fn selftest_must_fail() {
        let report = run_check(CheckId::HarnessSelftest, 10, 0).unwrap();
        assert!(!report.failures.is_empty());
        assert!(report.worst_margin < -report.tolerance);
        assert!(report.ok());
    }

    #[test]
    fn deterministic_and_order_free() {
        let a = run_check(CheckId::Vdh, 25, 77).unwrap();
        let b = run_check(CheckId::Vdh, 25, 77).unwrap();
        assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
        let mut margins: Vec<(u64, f64)> = (0..25)
            .rev()
            .map(|i| {
                let s = trial_seed(77, i);
                (s, trial_margin(CheckId::Vdh, s).unwrap())
            })
            .collect();
        margins.reverse();
        assert_eq!(aggregate(CheckId::Vdh, 77, &margins), a);
    }

    #[test]
    fn aggregate_edges() {
        let r = aggregate(CheckId::Dpi, 0, &[(1, f64::INFINITY), (2, 0.5)]);
        assert_eq!((r.worst_margin, r.failures.len()), (0.5, 0));
        let r = aggregate(CheckId::Dpi, 0, &[(1, f64::INFINITY)]);
        assert_eq!(r.worst_margin, f64::INFINITY);
        let r = aggregate(CheckId::Dpi, 0, &[(1, -1e-8), (2, f64::NEG_INFINITY)]);
        assert_eq!(r.failures.len(), 2);
        assert!(!r.ok());
    }

    #[test]
    fn ids_round_trip() {
        for id in CheckId::ALL {
            assert_eq!(id.name().parse::<CheckId>().unwrap(), id);
        }
        assert_eq!("lemma-a1".parse::<CheckId>().unwrap(), CheckId::LemmaA1);
        assert!("lemma9".parse::<CheckId>().is_err());
    }
}
