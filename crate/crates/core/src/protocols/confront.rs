use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use super::ProtocolRunResult;
use crate::converse::{ConverseBoundResult, TheoremId};
use crate::{Error, Result};

/// Slack allowed between achieved fidelity and `2^{log F bound}`.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfrontStatus {
    /// Achieved fidelity is within the bound.
    Ok,
    Violation,
    /// The bound has a nonnegative exponent and constrains nothing.
    Vacuous,
    /// No simulator exists for this theorem.
    BoundOnly,
}

impl ConfrontStatus {
    pub fn name(self) -> &'static str {
        match self {
            ConfrontStatus::Ok => "ok",
            ConfrontStatus::Violation => "VIOLATION",
            ConfrontStatus::Vacuous => "vacuous",
            ConfrontStatus::BoundOnly => "bound-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfrontRow {
    pub n: u64,
    pub rate: f64,
    pub achieved: Option<f64>,
    pub bound: ConverseBoundResult,
    /// `2^{log_fidelity_bound}`, capped at 1.
    pub fidelity_bound: f64,
    pub status: ConfrontStatus,
}

/// Bound-versus-achievability table over an `(n, rate)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfrontReport {
    pub theorem: TheoremId,
    pub rows: Vec<ConfrontRow>,
}

impl ConfrontReport {
    /// Pairs the two series point by point. An empty protocol series gives a
    /// bound-only report. The converse side must be evaluated at the integer
    /// resource size the protocol used.
    pub fn new(theorem: TheoremId, protocol: &[ProtocolRunResult], converse: Vec<ConverseBoundResult>) -> Result<Self> {
        if !protocol.is_empty() && protocol.len() != converse.len() {
            return Err(Error::InvalidArgument(alloc::format!(
                "{} protocol points against {} bound points",
                protocol.len(),
                converse.len()
            )));
        }
        let mut rows = Vec::with_capacity(converse.len());
        for (i, bound) in converse.into_iter().enumerate() {
            if bound.theorem_id != theorem {
                return Err(Error::InvalidArgument(alloc::format!("bound for {} in a {theorem} report", bound.theorem_id)));
            }
            let fidelity_bound = bound.log_fidelity_bound.exp2().min(1.0);
            let (achieved, rate, status) = match protocol.get(i) {
                None => (None, bound.rate, ConfrontStatus::BoundOnly),
                Some(p) => {
                    let resource = bound.rate * bound.n as f64;
                    if p.n != bound.n || (resource - p.log_size).abs() > 1e-9 * resource.max(1.0) {
                        return Err(Error::InvalidArgument(alloc::format!(
                            "grid mismatch at point {i}: protocol (n={}, log size {}) vs bound (n={}, {resource})",
                            p.n,
                            p.log_size,
                            bound.n
                        )));
                    }
                    let status = if bound.vacuous {
                        ConfrontStatus::Vacuous
                    } else if p.fidelity_lower <= bound.log_fidelity_bound.exp2() + VIOLATION_TOL {
                        ConfrontStatus::Ok
                    } else {
                        ConfrontStatus::Violation
                    };
                    (Some(p.fidelity_lower), p.rate, status)
                }
            };
            rows.push(ConfrontRow { n: bound.n, rate, achieved, bound, fidelity_bound, status });
        }
        Ok(Self { theorem, rows })
    }

    pub fn violations(&self) -> impl Iterator<Item = &ConfrontRow> {
        self.rows.iter().filter(|r| r.status == ConfrontStatus::Violation)
    }

    pub fn is_bound_only(&self) -> bool {
        self.rows.iter().all(|r| r.status == ConfrontStatus::BoundOnly)
    }

    /// Smallest `n` from which every later row has a bound below `level`.
    pub fn crossover(&self, level: f64) -> Option<u64> {
        let mut first = None;
        for r in &self.rows {
            if r.fidelity_bound < level {
                first.get_or_insert(r.n);
            } else {
                first = None;
            }
        }
        first
    }

    /// `BoundViolation` listing every offending row with its terms.
    pub fn check(&self) -> Result<()> {
        let mut msg = String::new();
        for r in self.violations() {
            let _ = write!(
                msg,
                "{} n={} rate={}: achieved {} > bound {} (alpha={}, exponent {});",
                self.theorem,
                r.n,
                r.rate,
                r.achieved.unwrap_or(f64::NAN),
                r.fidelity_bound,
                r.bound.alpha,
                r.bound.exponent_per_copy
            );
            for (name, v) in &r.bound.term_breakdown {
                let _ = write!(msg, " {name}={v}");
            }
            msg.push('\n');
        }
        if msg.is_empty() {
            Ok(())
        } else {
            Err(Error::BoundViolation(msg))
        }
    }
}

impl fmt::Display for ConfrontReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6} {:>8} {:>8} {:>14} {:>14} {:>12}  status", "n", "rate", "alpha", "achieved", "bound", "exponent")?;
        for r in &self.rows {
            let achieved = match r.achieved {
                Some(a) => alloc::format!("{a:.6e}"),
                None => "-".into(),
            };
            writeln!(
                f,
                "{:>6} {:>8.4} {:>8.5} {:>14} {:>14.6e} {:>12.6}  {}",
                r.n,
                r.rate,
                r.bound.alpha,
                achieved,
                r.fidelity_bound,
                r.bound.exponent_per_copy,
                r.status.name()
            )?;
        }
        Ok(())
    }
}

/// [`ConfrontReport::new`] followed by [`ConfrontReport::check`].
pub fn confront_bounds(
    theorem: TheoremId,
    protocol: &[ProtocolRunResult],
    converse: Vec<ConverseBoundResult>,
) -> Result<ConfrontReport> {
    let report = ConfrontReport::new(theorem, protocol, converse)?;
    report.check()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::converse::{optimize_alpha, ConverseProblem, SearchConfig};
    use crate::protocols::{concentrate_simulate, schumacher_mass};
    use crate::qstate::{PureState, SubsystemDims};

    #[test]
    fn schumacher_below_entropy() {
        let lambda = [0.9, 0.1];
        let ns: Vec<u64> = (1..=20).map(|i| 10 * i).collect();
        let runs: Vec<_> = ns.iter().map(|&n| schumacher_mass(&lambda, n, 0.3).unwrap()).collect();
        let bounds = runs
            .iter()
            .map(|r| {
                let p = ConverseProblem::schumacher_spectrum(lambda.to_vec(), r.n, r.log_size).unwrap();
                optimize_alpha(&p, &SearchConfig::default()).unwrap()
            })
            .collect();
        let report = confront_bounds(TheoremId::Schumacher, &runs, bounds).unwrap();
        assert!(report.rows.iter().all(|r| r.status == ConfrontStatus::Ok));
        assert!(report.crossover(0.5).is_some());
    }

    #[test]
    fn flat_concentration_at_full_rate() {
        let psi = PureState::schmidt_form(&[0.5, 0.5]).unwrap();
        for n in [1u64, 8, 50] {
            let run = concentrate_simulate(&[0.5, 0.5], n, n as f64).unwrap();
            assert_eq!(run.fidelity_lower, 1.0);
            let p = ConverseProblem::concentrate(&psi, n, run.log_size).unwrap();
            let bound = optimize_alpha(&p, &SearchConfig::default()).unwrap();
            assert!(bound.vacuous && bound.log_fidelity_bound.abs() < 1e-12);
            let report = confront_bounds(TheoremId::Concentrate, &[run], alloc::vec![bound]).unwrap();
            assert_eq!(report.rows[0].status, ConfrontStatus::Vacuous);
        }
    }

    #[test]
    fn merging_is_bound_only() {
        let phi = PureState::maximally_entangled(2).unwrap().relabeled(&[("B", "R")]).unwrap();
        let zero = PureState::basis(SubsystemDims::single("B", 2).unwrap(), 0).unwrap();
        let psi = phi.tensor(&zero).permuted(&["A", "B", "R"]).unwrap();
        let bounds = [10u64, 20]
            .iter()
            .map(|&n| ConverseProblem::merge_ent(&psi, n, 0.5 * n as f64, 0.0).unwrap().evaluate(2.0).unwrap())
            .collect();
        let report = confront_bounds(TheoremId::MergeEnt, &[], bounds).unwrap();
        assert!(report.is_bound_only());
        assert!(alloc::format!("{report}").contains("bound-only"));
    }

    #[test]
    fn reports_violations_with_terms() {
        let run = schumacher_mass(&[0.9, 0.1], 50, 0.3).unwrap();
        let p = ConverseProblem::schumacher_spectrum(alloc::vec![0.9, 0.1], 50, run.log_size).unwrap();
        let mut bound = p.evaluate(0.75).unwrap();
        bound.log_fidelity_bound = -40.0;
        let err = confront_bounds(TheoremId::Schumacher, core::slice::from_ref(&run), alloc::vec![bound.clone()]).unwrap_err();
        match err {
            Error::BoundViolation(msg) => assert!(msg.contains("S_")),
            e => panic!("{e:?}"),
        }
        let mut other = run;
        other.n = 60;
        assert!(matches!(
            ConfrontReport::new(TheoremId::Schumacher, &[other], alloc::vec![bound]),
            Err(Error::InvalidArgument(_))
        ));
    }
}
