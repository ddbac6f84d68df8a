//! Achievability simulators for Schumacher compression and entanglement
//! concentration, and a harness confronting them with the converse bounds.
//!
//! Everything is exact enumeration over type classes: multiplicities are big
//! integers, probabilities are floats summed largest first with
//! compensation.

mod confront;
mod types;

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::linalg::{c, CMatrix, CVector};
use crate::numeric::{floor_pow2, log2_big, sum_descending};
use crate::qstate::{purify, DensityMatrix, QuantumChannel};
use crate::{Error, Result};

pub use confront::{confront_bounds, ConfrontReport, ConfrontRow, ConfrontStatus};
pub use types::{SpectrumTypeClass, TypeClass, MAX_COPIES, MAX_TYPE_CLASSES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Schumacher,
    Concentrate,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Schumacher => "schumacher",
            Protocol::Concentrate => "concentrate",
        }
    }
}

/// Outcome of one simulated protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolRunResult {
    pub protocol: Protocol,
    pub n: u64,
    /// Nominal rate in bits per copy.
    pub rate: f64,
    /// `log₂` of the integer size actually used, `⌊2^{n·rate}⌋`.
    pub log_size: f64,
    /// Schumacher: weight of the kept subspace. Concentration: the success
    /// probability.
    pub eta: f64,
    /// Schumacher: `√η`. Concentration: the achieved fidelity with `Φ_L`.
    pub fidelity_lower: f64,
    pub fidelity_exact: Option<f64>,
    pub success_prob: Option<f64>,
    /// `(log₂ M_k, p_k)` per type class.
    pub yield_distribution: Option<Vec<(f64, f64)>>,
}

impl ProtocolRunResult {
    /// `E[log₂ M_k] / n` for a concentration run.
    pub fn mean_yield_rate(&self) -> Option<f64> {
        let dist = self.yield_distribution.as_ref()?;
        let mut terms: Vec<f64> = dist.iter().filter(|(_, p)| *p > 0.0).map(|(m, p)| m * p).collect();
        Some(sum_descending(&mut terms) / self.n as f64)
    }
}

fn check_rate(rate: f64, d: usize) -> Result<f64> {
    let max = (d as f64).log2();
    if !(rate >= 0.0 && rate <= max + 1e-12) {
        return Err(Error::RateOutOfRange { rate, max });
    }
    Ok(rate.min(max))
}

/// Keep size `⌊2^{nR}⌋`, exactly `dⁿ` at `R = log d`.
fn keep_size(d: usize, n: u64, rate: f64) -> BigUint {
    if rate >= (d as f64).log2() - 1e-12 {
        BigUint::from(d).pow(n as u32)
    } else {
        floor_pow2(n as f64 * rate)
    }
}

/// Weight of the `⌊2^{nR}⌋` largest eigenvalues of `ρ^{⊗n}` for spectrum `λ`.
///
/// Classes are consumed by decreasing string probability; the class
/// straddling the boundary contributes only the remaining count.
pub fn schumacher_mass(lambda: &[f64], n: u64, rate: f64) -> Result<ProtocolRunResult> {
    let rate = check_rate(rate, lambda.len())?;
    let types = SpectrumTypeClass::new(lambda, n)?;
    let size = keep_size(lambda.len(), n, rate);
    let mut remaining = size.clone();
    let mut kept = Vec::new();
    for i in types.by_probability() {
        if remaining.is_zero() {
            break;
        }
        let class = &types.classes()[i];
        if class.log2_prob == f64::NEG_INFINITY {
            break;
        }
        let take = if class.multiplicity <= remaining { class.multiplicity.clone() } else { remaining.clone() };
        kept.push((log2_big(&take) + class.log2_prob).exp2());
        remaining -= take;
    }
    // everything kept: the rounding in the sum is not a loss
    let eta = if size >= types.total_multiplicity() { 1.0 } else { sum_descending(&mut kept).clamp(0.0, 1.0) };
    Ok(ProtocolRunResult {
        protocol: Protocol::Schumacher,
        n,
        rate,
        log_size: log2_big(&size),
        eta,
        fidelity_lower: eta.sqrt(),
        fidelity_exact: None,
        success_prob: None,
        yield_distribution: None,
    })
}

/// Largest `n` for [`schumacher_exact_small`].
pub const EXACT_MAX_COPIES: u64 = 6;
const EXACT_MAX_DIM: usize = 64;

/// Dense evaluation of the keep-top-`L` compression on `ρ^{⊗n}`.
///
/// The kept subspace is spanned by the `L` most probable eigenstrings; the
/// complement is sent to the most probable string. The fidelity
/// `F(Ω^{RA}, Ψ^{RA})` against the canonical purification is
/// `(Σ_K |⟨Ψ|(1⊗K)|Ψ⟩|²)^{1/2}` over the channel's Kraus operators.
pub fn schumacher_exact_small(rho: &DensityMatrix, n: u64, rate: f64) -> Result<ProtocolRunResult> {
    let d = rho.dim();
    let total = (n <= EXACT_MAX_COPIES).then(|| d.checked_pow(n as u32)).flatten();
    let big_d = match total {
        Some(t) if n > 0 && t <= EXACT_MAX_DIM => t,
        _ => return Err(Error::TooLarge(alloc::format!("dense evaluation needs n ≤ 6 and dⁿ ≤ 64 (d = {d}, n = {n})"))),
    };
    let spectrum: Vec<f64> = rho.eigenvalues().iter().map(|x| x.max(0.0)).collect();
    let mut result = schumacher_mass(&spectrum, n, rate)?;
    let keep = keep_size(d, n, result.rate).to_usize().unwrap_or(usize::MAX).min(big_d);

    let eig = rho.eigen();
    let mut strings: Vec<(f64, Vec<usize>)> = (0..big_d)
        .map(|mut x| {
            let mut digits = alloc::vec![0; n as usize];
            for slot in digits.iter_mut().rev() {
                *slot = x % d;
                x /= d;
            }
            let p = digits.iter().map(|&i| eig.values[i].max(0.0)).product();
            (p, digits)
        })
        .collect();
    strings.sort_by(|a, b| b.0.total_cmp(&a.0));
    let vectors: Vec<CVector> = strings
        .iter()
        .map(|(_, digits)| {
            digits.iter().fold(CVector::from_element(1, c(1.0, 0.0)), |acc, &i| {
                crate::linalg::kron_vec(&acc, &eig.vectors.column(i).into_owned())
            })
        })
        .collect();

    let mut kraus = Vec::with_capacity(1 + big_d - keep);
    let mut projector = CMatrix::zeros(big_d, big_d);
    for v in &vectors[..keep.max(1)] {
        projector += v * v.adjoint();
    }
    kraus.push(projector);
    let fallback = &vectors[0];
    for v in &vectors[keep.max(1)..] {
        kraus.push(fallback * v.adjoint());
    }
    let rho_n = rho.tensor_power(n as usize)?;
    let channel = QuantumChannel::new(rho_n.dims().clone(), rho_n.dims().clone(), kraus)?;

    // Ψ as a rank × dⁿ matrix, reference register first.
    let psi = purify(&rho_n);
    let rank = psi.dim() / big_d;
    let m = CMatrix::from_fn(rank, big_d, |i, a| psi.amplitudes()[i * big_d + a]);
    let mut overlaps: Vec<f64> = channel
        .kraus()
        .iter()
        .map(|k| (m.conjugate() * k * m.transpose()).trace().norm_sqr())
        .collect();
    result.fidelity_exact = Some(sum_descending(&mut overlaps).sqrt());
    Ok(result)
}

/// Type-class concentration of `ψ^{⊗n}` toward a fixed `Φ_L`,
/// `L = ⌊2^{logL}⌋`.
///
/// Measuring the type `k` (over distinct Schmidt coefficients) leaves
/// `Φ_{M_k}` with `M_k` the class multiplicity. Conversion to `Φ_L` is perfect when `M_k ≥ L` and has
/// fidelity `√(M_k/L)` otherwise.
pub fn concentrate_simulate(schmidt_probs: &[f64], n: u64, log_l: f64) -> Result<ProtocolRunResult> {
    if !(log_l >= 0.0 && log_l.is_finite()) {
        return Err(Error::RateOutOfRange { rate: log_l / n.max(1) as f64, max: f64::INFINITY });
    }
    let types = SpectrumTypeClass::new(schmidt_probs, n)?;
    let target = floor_pow2(log_l);
    let log_target = log2_big(&target);
    let mut fid = Vec::with_capacity(types.classes().len());
    let mut success = Vec::new();
    let mut dist = Vec::with_capacity(types.classes().len());
    for class in types.classes() {
        let p = class.mass();
        let log_m = log2_big(&class.multiplicity);
        dist.push((log_m, p));
        if class.multiplicity >= target {
            fid.push(p);
            success.push(p);
        } else {
            fid.push(p * (0.5 * (log_m - log_target)).exp2());
        }
    }
    let success_prob = sum_descending(&mut success).clamp(0.0, 1.0);
    Ok(ProtocolRunResult {
        protocol: Protocol::Concentrate,
        n,
        rate: log_l / n as f64,
        log_size: log_target,
        eta: success_prob,
        fidelity_lower: sum_descending(&mut fid).clamp(0.0, 1.0),
        fidelity_exact: None,
        success_prob: Some(success_prob),
        yield_distribution: Some(dist),
    })
}
