//! Strong-converse log-fidelity bounds.
//!
//! Each theorem bounds `log F ≤ n · c(α) · bracket(α, rate)` where `rate` is
//! the per-copy resource and the bracket is built from Rényi entropies of
//! single-copy marginals. The exponent is affine in `n`, so nothing here ever
//! builds an n-copy state. A nonnegative exponent is still a true bound, just
//! an empty one; such results carry `vacuous = true`.
//!
//! | Theorem | α range | `c(α)` | bracket |
//! |---|---|---|---|
//! | `merge_ent` | (1, 2] | (α−1)/2α | `(logK − logL)/n + S_{2−α}(B) − S_{1/(2−α)}(AB)` |
//! | `merge_cc` | (½, 1) | (1−α)/4α | `logX/n − S_β(A) − S_β(R) + S_α(AR)` |
//! | `concentrate` | (1, 2] | (α−1)/2α | `S_{2−α}(A) − logL/n` |
//! | `schumacher` | (½, 1) | (1−α)/2α | `logB/n − S_β(A)` |
//!
//! with `β = α/(2α − 1)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::entropy::renyi_entropy_of_spectrum;
use crate::qstate::{DensityMatrix, PureState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// Entanglement cost of state merging.
    MergeEnt,
    /// Classical communication cost of state merging.
    MergeCc,
    /// Entanglement concentration.
    Concentrate,
    /// Schumacher compression.
    Schumacher,
}

impl TheoremId {
    pub const ALL: [TheoremId; 4] =
        [TheoremId::MergeEnt, TheoremId::MergeCc, TheoremId::Concentrate, TheoremId::Schumacher];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::MergeEnt => "merge_ent",
            TheoremId::MergeCc => "merge_cc",
            TheoremId::Concentrate => "concentrate",
            TheoremId::Schumacher => "schumacher",
        }
    }

    /// Valid orders as `(lo, hi, hi_inclusive)`; `lo` is always excluded.
    pub fn alpha_range(self) -> (f64, f64, bool) {
        match self {
            TheoremId::MergeEnt | TheoremId::Concentrate => (1.0, 2.0, true),
            TheoremId::MergeCc | TheoremId::Schumacher => (0.5, 1.0, false),
        }
    }

    fn range_text(self) -> &'static str {
        match self {
            TheoremId::MergeEnt | TheoremId::Concentrate => "(1, 2]",
            TheoremId::MergeCc | TheoremId::Schumacher => "(0.5, 1)",
        }
    }

    fn check_alpha(self, alpha: f64) -> Result<()> {
        let (lo, hi, inclusive) = self.alpha_range();
        let ok = alpha > lo && (alpha < hi || (inclusive && alpha == hi));
        if ok {
            Ok(())
        } else {
            Err(Error::AlphaOutOfRange { alpha, range: self.range_text() })
        }
    }

    /// `c(α)`.
    pub fn prefactor(self, alpha: f64) -> f64 {
        match self {
            TheoremId::MergeEnt | TheoremId::Concentrate => (alpha - 1.0) / (2.0 * alpha),
            TheoremId::MergeCc => (1.0 - alpha) / (4.0 * alpha),
            TheoremId::Schumacher => (1.0 - alpha) / (2.0 * alpha),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "merge_ent" => Ok(TheoremId::MergeEnt),
            "merge_cc" => Ok(TheoremId::MergeCc),
            "concentrate" => Ok(TheoremId::Concentrate),
            "schumacher" => Ok(TheoremId::Schumacher),
            _ => Err(Error::InvalidArgument(alloc::format!("unknown theorem `{s}`"))),
        }
    }
}

/// One evaluated bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ConverseBoundResult {
    pub theorem_id: TheoremId,
    pub alpha: f64,
    pub n: u64,
    /// Per-copy resource rate entering the bracket, in bits.
    pub rate: f64,
    /// The raw resource sizes (`logK`, `logL`, `logX`, `logB`), in bits.
    pub rate_params: Vec<(&'static str, f64)>,
    /// Upper bound on `log₂ F`; always `n · exponent_per_copy`.
    pub log_fidelity_bound: f64,
    pub exponent_per_copy: f64,
    /// Every entropy term of the bracket.
    pub term_breakdown: Vec<(String, f64)>,
    pub vacuous: bool,
}

/// Single-copy spectra a theorem needs, plus the rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConverseProblem {
    theorem: TheoremId,
    n: u64,
    rate: f64,
    rate_params: Vec<(&'static str, f64)>,
    spectra: Vec<Vec<f64>>,
}

fn check_log(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(alloc::format!("{name} must be a finite nonnegative number of bits")))
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("n must be positive".into()))
    } else {
        Ok(())
    }
}

fn tripartite_spectra(psi: &PureState, groups: &[&[&str]]) -> Result<Vec<Vec<f64>>> {
    for l in ["A", "B", "R"] {
        if !psi.dims().contains(l) {
            return Err(Error::MissingRegister(l.into()));
        }
    }
    if psi.dims().len() != 3 {
        return Err(Error::InvalidDims("merging needs exactly the registers A, B, R".into()));
    }
    groups.iter().map(|g| Ok(psi.marginal(g)?.eigenvalues().to_vec())).collect()
}

impl ConverseProblem {
    /// State merging, entanglement rate `(logK − logL)/n`.
    pub fn merge_ent(psi: &PureState, n: u64, log_k: f64, log_l: f64) -> Result<Self> {
        check_n(n)?;
        check_log("logK", log_k)?;
        check_log("logL", log_l)?;
        let spectra = tripartite_spectra(psi, &[&["B"], &["A", "B"]])?;
        Ok(Self {
            theorem: TheoremId::MergeEnt,
            n,
            rate: (log_k - log_l) / n as f64,
            rate_params: alloc::vec![("logK", log_k), ("logL", log_l)],
            spectra,
        })
    }

    /// State merging, communication rate `logX/n`.
    pub fn merge_cc(psi: &PureState, n: u64, log_x: f64) -> Result<Self> {
        check_n(n)?;
        check_log("logX", log_x)?;
        let spectra = tripartite_spectra(psi, &[&["A"], &["R"], &["A", "R"]])?;
        Ok(Self {
            theorem: TheoremId::MergeCc,
            n,
            rate: log_x / n as f64,
            rate_params: alloc::vec![("logX", log_x)],
            spectra,
        })
    }

    /// Concentration of `ψ^{AB}` into `Φ_L`, rate `logL/n`.
    pub fn concentrate(psi: &PureState, n: u64, log_l: f64) -> Result<Self> {
        check_n(n)?;
        check_log("logL", log_l)?;
        if !psi.dims().contains("A") {
            return Err(Error::MissingRegister("A".into()));
        }
        if psi.dims().len() < 2 {
            return Err(Error::InvalidDims("concentration needs a bipartite state".into()));
        }
        let spectra = alloc::vec![psi.marginal(&["A"])?.eigenvalues().to_vec()];
        Ok(Self {
            theorem: TheoremId::Concentrate,
            n,
            rate: log_l / n as f64,
            rate_params: alloc::vec![("logL", log_l)],
            spectra,
        })
    }

    /// Compression of the source `ρ` into `logB` qubits, rate `logB/n`.
    pub fn schumacher(rho: &DensityMatrix, n: u64, log_b: f64) -> Result<Self> {
        Self::schumacher_spectrum(rho.eigenvalues().to_vec(), n, log_b)
    }

    /// As [`ConverseProblem::schumacher`] from the source spectrum.
    pub fn schumacher_spectrum(spectrum: Vec<f64>, n: u64, log_b: f64) -> Result<Self> {
        check_n(n)?;
        check_log("logB", log_b)?;
        Ok(Self {
            theorem: TheoremId::Schumacher,
            n,
            rate: log_b / n as f64,
            rate_params: alloc::vec![("logB", log_b)],
            spectra: alloc::vec![spectrum],
        })
    }

    pub fn theorem(&self) -> TheoremId {
        self.theorem
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    fn s(&self, which: usize, order: f64) -> f64 {
        renyi_entropy_of_spectrum(&self.spectra[which], order)
    }

    /// Entropy terms with their names, in bracket order.
    fn terms(&self, alpha: f64) -> Vec<(String, f64)> {
        let named = |name: &str, v: f64| (String::from(name), v);
        match self.theorem {
            TheoremId::MergeEnt => {
                let hi = if alpha == 2.0 { f64::INFINITY } else { 1.0 / (2.0 - alpha) };
                alloc::vec![named("S_{2-a}(B)", self.s(0, 2.0 - alpha)), named("S_{1/(2-a)}(AB)", self.s(1, hi))]
            }
            TheoremId::MergeCc => {
                let beta = alpha / (2.0 * alpha - 1.0);
                alloc::vec![
                    named("S_b(A)", self.s(0, beta)),
                    named("S_b(R)", self.s(1, beta)),
                    named("S_a(AR)", self.s(2, alpha)),
                ]
            }
            TheoremId::Concentrate => alloc::vec![named("S_{2-a}(A)", self.s(0, 2.0 - alpha))],
            TheoremId::Schumacher => {
                let beta = alpha / (2.0 * alpha - 1.0);
                alloc::vec![named("S_b(A)", self.s(0, beta))]
            }
        }
    }

    fn bracket_from(&self, terms: &[(String, f64)]) -> f64 {
        let t = |i: usize| terms[i].1;
        match self.theorem {
            TheoremId::MergeEnt => self.rate + t(0) - t(1),
            TheoremId::MergeCc => self.rate - t(0) - t(1) + t(2),
            TheoremId::Concentrate => t(0) - self.rate,
            TheoremId::Schumacher => self.rate - t(0),
        }
    }

    /// The bracket at any order where its entropies are defined, including
    /// points just outside the theorem's range (used for limit checks).
    pub fn bracket(&self, alpha: f64) -> f64 {
        self.bracket_from(&self.terms(alpha))
    }

    /// The `α → 1` value of the bracket, in von Neumann entropies:
    /// `rate − S(A|B)`, `rate − I(A:R)`, `S(A) − rate`, `rate − S(A)`.
    pub fn limit_bracket(&self) -> f64 {
        let s = |i: usize| self.s(i, 1.0);
        match self.theorem {
            TheoremId::MergeEnt => self.rate + s(0) - s(1),
            TheoremId::MergeCc => self.rate - s(0) - s(1) + s(2),
            TheoremId::Concentrate => s(0) - self.rate,
            TheoremId::Schumacher => self.rate - s(0),
        }
    }

    pub fn evaluate(&self, alpha: f64) -> Result<ConverseBoundResult> {
        self.theorem.check_alpha(alpha)?;
        let term_breakdown = self.terms(alpha);
        let exponent_per_copy = self.theorem.prefactor(alpha) * self.bracket_from(&term_breakdown);
        Ok(ConverseBoundResult {
            theorem_id: self.theorem,
            alpha,
            n: self.n,
            rate: self.rate,
            rate_params: self.rate_params.clone(),
            log_fidelity_bound: self.n as f64 * exponent_per_copy,
            exponent_per_copy,
            term_breakdown,
            vacuous: !(exponent_per_copy < 0.0),
        })
    }

    fn exponent(&self, alpha: f64) -> f64 {
        self.theorem.prefactor(alpha) * self.bracket(alpha)
    }
}

pub fn merge_ent_bound(psi: &PureState, alpha: f64, n: u64, log_k: f64, log_l: f64) -> Result<ConverseBoundResult> {
    ConverseProblem::merge_ent(psi, n, log_k, log_l)?.evaluate(alpha)
}

pub fn merge_cc_bound(psi: &PureState, alpha: f64, n: u64, log_x: f64) -> Result<ConverseBoundResult> {
    ConverseProblem::merge_cc(psi, n, log_x)?.evaluate(alpha)
}

pub fn concentrate_bound(psi: &PureState, alpha: f64, n: u64, log_l: f64) -> Result<ConverseBoundResult> {
    ConverseProblem::concentrate(psi, n, log_l)?.evaluate(alpha)
}

pub fn schumacher_bound(rho: &DensityMatrix, alpha: f64, n: u64, log_b: f64) -> Result<ConverseBoundResult> {
    ConverseProblem::schumacher(rho, n, log_b)?.evaluate(alpha)
}

/// α search: a uniform scan followed by golden-section refinement around the
/// best grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub grid_points: usize,
    /// Distance kept from open endpoints (`α = 1` and `α = 1/2`).
    pub inset: f64,
    /// Bracket width at which golden-section search stops.
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { grid_points: 64, inset: 1e-6, tolerance: 1e-10, max_iters: 200 }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// The order minimizing the per-copy exponent (the strongest bound). Returns
/// a vacuous result when no order gives a negative exponent.
pub fn optimize_alpha(problem: &ConverseProblem, config: &SearchConfig) -> Result<ConverseBoundResult> {
    let (lo, hi, inclusive) = problem.theorem.alpha_range();
    let a = lo + config.inset;
    let b = if inclusive { hi } else { hi - config.inset };
    let points = config.grid_points.max(3);
    let grid: Vec<f64> = (0..points).map(|i| a + (b - a) * i as f64 / (points - 1) as f64).collect();
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for (i, &x) in grid.iter().enumerate() {
        let v = problem.exponent(x);
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    let mut l = grid[best.saturating_sub(1)];
    let mut r = grid[(best + 1).min(points - 1)];
    let mut x1 = r - INV_PHI * (r - l);
    let mut x2 = l + INV_PHI * (r - l);
    let mut f1 = problem.exponent(x1);
    let mut f2 = problem.exponent(x2);
    for _ in 0..config.max_iters {
        if r - l <= config.tolerance {
            break;
        }
        if f1 <= f2 {
            r = x2;
            x2 = x1;
            f2 = f1;
            x1 = r - INV_PHI * (r - l);
            f1 = problem.exponent(x1);
        } else {
            l = x1;
            x1 = x2;
            f1 = f2;
            x2 = l + INV_PHI * (r - l);
            f2 = problem.exponent(x2);
        }
    }
    let (mut alpha, mut val) = (grid[best], best_val);
    for (x, f) in [(x1, f1), (x2, f2)] {
        if f < val {
            alpha = x;
            val = f;
        }
    }
    problem.evaluate(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::SubsystemDims;

    /// `Φ₂^{AR} ⊗ |0⟩^B` with registers ordered A, B, R.
    fn phi_ar() -> PureState {
        let phi = PureState::maximally_entangled(2).unwrap().relabeled(&[("B", "R")]).unwrap();
        let zero = PureState::basis(SubsystemDims::single("B", 2).unwrap(), 0).unwrap();
        phi.tensor(&zero).permuted(&["A", "B", "R"]).unwrap()
    }

    #[test]
    fn merge_worked_cases() {
        let psi = phi_ar();
        let r = merge_ent_bound(&psi, 2.0, 10, 5.0, 0.0).unwrap();
        assert!((r.exponent_per_copy + 0.125).abs() < 1e-12);
        assert_eq!(r.log_fidelity_bound, 10.0 * r.exponent_per_copy);
        let r = merge_cc_bound(&psi, 0.75, 10, 10.0).unwrap();
        assert!((r.exponent_per_copy + 1.0 / 12.0).abs() < 1e-12);
        assert!(!r.vacuous);
    }

    #[test]
    fn concentration_examples() {
        let phi = PureState::maximally_entangled(2).unwrap();
        for alpha in [1.1, 1.5, 2.0] {
            assert!(concentrate_bound(&phi, alpha, 7, 7.0).unwrap().exponent_per_copy.abs() < 1e-15);
        }
        let psi = PureState::schmidt_form(&[0.8, 0.2]).unwrap();
        let r = concentrate_bound(&psi, 2.0, 100, 90.0).unwrap();
        assert!((r.exponent_per_copy - 0.025).abs() < 1e-12 && r.vacuous);
        let r = concentrate_bound(&psi, 1.1, 100, 90.0).unwrap();
        assert!((r.exponent_per_copy + 0.00705797066403576).abs() < 1e-12);
        assert!(concentrate_bound(&psi, 1.5, 10, 0.0).unwrap().vacuous);
    }

    #[test]
    fn schumacher_examples() {
        let mixed = DensityMatrix::maximally_mixed(SubsystemDims::single("A", 2).unwrap());
        let r = schumacher_bound(&mixed, 0.75, 10, 5.0).unwrap();
        assert!((r.exponent_per_copy + 1.0 / 12.0).abs() < 1e-12);
        let rho = DensityMatrix::diagonal(SubsystemDims::single("A", 2).unwrap(), &[0.9, 0.1]).unwrap();
        let r = schumacher_bound(&rho, 0.75, 10, 3.0).unwrap();
        assert!((r.exponent_per_copy + 0.00851240675781314).abs() < 1e-12);
        for alpha in [0.55, 0.75, 0.95] {
            assert!(schumacher_bound(&rho, alpha, 10, 10.0).unwrap().vacuous);
        }
    }

    #[test]
    fn alpha_ranges_enforced() {
        let rho = DensityMatrix::diagonal(SubsystemDims::single("A", 2).unwrap(), &[0.9, 0.1]).unwrap();
        assert!(matches!(schumacher_bound(&rho, 1.0, 10, 3.0), Err(Error::AlphaOutOfRange { .. })));
        assert!(matches!(schumacher_bound(&rho, 0.5, 10, 3.0), Err(Error::AlphaOutOfRange { .. })));
        let psi = PureState::schmidt_form(&[0.8, 0.2]).unwrap();
        assert!(matches!(merge_ent_bound(&psi, 1.5, 10, 1.0, 0.0), Err(Error::MissingRegister(_))));
        assert!(matches!(concentrate_bound(&psi, 1.0, 10, 1.0), Err(Error::AlphaOutOfRange { .. })));
    }

    #[test]
    fn optimization_beats_fixed_order() {
        let rho = DensityMatrix::diagonal(SubsystemDims::single("A", 2).unwrap(), &[0.9, 0.1]).unwrap();
        let p = ConverseProblem::schumacher(&rho, 10, 3.0).unwrap();
        let best = optimize_alpha(&p, &SearchConfig::default()).unwrap();
        assert!(best.exponent_per_copy <= -0.00851240675781314);
        let psi = PureState::schmidt_form(&[0.8, 0.2]).unwrap();
        let at_entropy = ConverseProblem::concentrate(&psi, 1, 0.721928094887362).unwrap();
        assert!(optimize_alpha(&at_entropy, &SearchConfig::default()).unwrap().exponent_per_copy.abs() < 1e-6);
    }

    #[test]
    fn limits_match_von_neumann() {
        let psi = PureState::schmidt_form(&[0.8, 0.2]).unwrap();
        let p = ConverseProblem::concentrate(&psi, 1, 0.5).unwrap();
        assert!((p.bracket(1.0 + 1e-5) - p.limit_bracket()).abs() < 1e-4);
        let q = ConverseProblem::merge_cc(&phi_ar(), 1, 1.0).unwrap();
        assert!((q.bracket(1.0 - 1e-5) - q.limit_bracket()).abs() < 1e-4);
        assert!((q.limit_bracket() + 1.0).abs() < 1e-12);
    }
}
