//! Rényi entropies, Petz–Rényi divergences and the Rényi coherent information.
//!
//! All logarithms are base 2. Eigenvalues below the zero cutoff of the state
//! they belong to are treated as exactly zero, and every power of a zero
//! eigenvalue is zero (so negative powers act as generalized inverses and
//! `X⁰` is the support projector).

use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::linalg::{self, CMatrix, HermEigen};
use crate::numeric::CompensatedSum;
use crate::qstate::{BipartiteSplit, DensityMatrix, SubsystemDims, Tolerances};
use crate::{Error, Result};

/// Which side of 1 an order sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    BelowOne,
    One,
    AboveOne,
    Infinity,
}

/// A validated divergence order `α ∈ [0, 2] ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenyiOrder {
    alpha: f64,
}

impl RenyiOrder {
    pub const ONE: RenyiOrder = RenyiOrder { alpha: 1.0 };
    pub const INFINITY: RenyiOrder = RenyiOrder { alpha: f64::INFINITY };

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha == f64::INFINITY || (0.0..=2.0).contains(&alpha) {
            Ok(Self { alpha })
        } else {
            Err(Error::AlphaOutOfRange { alpha, range: "[0, 2] ∪ {∞}" })
        }
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    pub fn regime(self) -> Regime {
        if self.alpha.is_infinite() {
            Regime::Infinity
        } else if self.alpha < 1.0 {
            Regime::BelowOne
        } else if self.alpha == 1.0 {
            Regime::One
        } else {
            Regime::AboveOne
        }
    }

    /// `β = α/(2α − 1)`, the dual order of the van Dam–Hayden inequality,
    /// defined for `α ∈ [1/2, 1)`; `β = ∞` at `α = 1/2`.
    pub fn beta(self) -> Result<f64> {
        beta(self.alpha)
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha.is_infinite() {
            f.write_str("∞")
        } else {
            write!(f, "{}", self.alpha)
        }
    }
}

/// `β = α/(2α − 1)` for `α ∈ [1/2, 1)`.
pub fn beta(alpha: f64) -> Result<f64> {
    if !(0.5..1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange { alpha, range: "[0.5, 1)" });
    }
    if alpha == 0.5 {
        Ok(f64::INFINITY)
    } else {
        Ok(alpha / (2.0 * alpha - 1.0))
    }
}

/// A real number or `+∞`. Ordered with `+∞` above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    /// `f64::INFINITY` for `+∞`.
    pub fn value(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PosInfinity => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::PosInfinity => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtendedReal::PosInfinity
        } else {
            ExtendedReal::Finite(x)
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PosInfinity => f.write_str("+inf"),
        }
    }
}

fn check_entropy_order(alpha: f64) -> Result<()> {
    if alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange { alpha, range: "[0, ∞]" })
    }
}

fn check_divergence_order(alpha: f64) -> Result<()> {
    if alpha.is_finite() && (0.0..=2.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange { alpha, range: "[0, 2]" })
    }
}

/// `x^p` with `0^p := 0` for every `p`.
pub(crate) fn gpow(x: f64, p: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if p == 1.0 {
        x
    } else {
        x.powf(p)
    }
}

/// Rényi entropy of a probability vector. Entries below
/// `len · 1e-12 · max` count as zero. `α` may be any order in `[0, ∞]`.
pub fn renyi_entropy_of_spectrum(spectrum: &[f64], alpha: f64) -> f64 {
    let max = spectrum.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) {
        return 0.0;
    }
    let cutoff = linalg::zero_cutoff(spectrum.len(), max);
    let mut p: Vec<f64> = spectrum.iter().copied().filter(|&x| x > cutoff).collect();
    p.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = p.iter().sum();
    for x in &mut p {
        *x /= total;
    }
    let pmax = p[0];
    if alpha == 0.0 {
        (p.len() as f64).log2()
    } else if alpha == 1.0 {
        let mut acc = CompensatedSum::new();
        for &x in &p {
            acc.add(-x * x.log2());
        }
        acc.value()
    } else if alpha.is_infinite() {
        -pmax.log2()
    } else {
        // Σ p^α = pmax^α Σ (p/pmax)^α keeps large orders finite
        let mut acc = CompensatedSum::new();
        for &x in &p {
            acc.add((x / pmax).powf(alpha));
        }
        (alpha * pmax.log2() + acc.value().log2()) / (1.0 - alpha)
    }
}

/// `S_α(ρ) = log Tr ρ^α / (1 − α)`, with `log rank` at `α = 0`, the von
/// Neumann entropy at `α = 1` and `−log λ_max` at `α = ∞`.
///
/// Orders above 2 are accepted: the strong-converse bounds need `S_{1/(2−α)}`.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_entropy_order(alpha)?;
    Ok(renyi_entropy_of_spectrum(rho.eigenvalues(), alpha))
}

/// Von Neumann entropy `S(ρ)`.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    renyi_entropy_of_spectrum(rho.eigenvalues(), 1.0)
}

/// `|⟨u_i|v_j⟩|²` for eigenvectors of two operators.
fn overlaps(a: &HermEigen, b: &HermEigen) -> CMatrix {
    a.vectors.adjoint() * &b.vectors
}

/// Eigenvalues with the cutoff applied.
fn clipped(e: &HermEigen) -> Vec<f64> {
    let cut = e.cutoff();
    e.values.iter().map(|&x| if x > cut { x } else { 0.0 }).collect()
}

/// `Tr[(I − Π_σ) ρ]`: the weight of `ρ` outside the support of `σ`.
fn weight_outside(rho: &HermEigen, sigma: &HermEigen) -> f64 {
    let r = clipped(rho);
    let s = clipped(sigma);
    let ov = overlaps(rho, sigma);
    let mut inside = CompensatedSum::new();
    for (i, &ri) in r.iter().enumerate() {
        if ri == 0.0 {
            continue;
        }
        for (j, &sj) in s.iter().enumerate() {
            if sj > 0.0 {
                inside.add(ri * ov[(i, j)].norm_sqr());
            }
        }
    }
    let total: f64 = r.iter().sum();
    total - inside.value()
}

/// `Tr A^p B^q` from eigendecompositions, zero eigenvalues mapping to zero.
pub(crate) fn trace_power_pair(a: &HermEigen, p: f64, b: &HermEigen, q: f64) -> f64 {
    let x = clipped(a);
    let y = clipped(b);
    let ov = overlaps(a, b);
    let mut acc = CompensatedSum::new();
    for (i, &xi) in x.iter().enumerate() {
        let xp = gpow(xi, p);
        if xp == 0.0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            let yq = gpow(yj, q);
            if yq != 0.0 {
                acc.add(xp * yq * ov[(i, j)].norm_sqr());
            }
        }
    }
    acc.value()
}

fn check_same_space(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() == sigma.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() })
    }
}

/// Support violations count when `ρ` has more than its own zero-cutoff
/// weight outside `supp σ`.
fn support_violated(rho: &DensityMatrix, sigma: &DensityMatrix) -> bool {
    weight_outside(rho.eigen(), sigma.eigen()) > rho.zero_cutoff().max(f64::EPSILON)
}

/// `Tr ρ^α σ^{1−α}`, or `+∞` when `α > 1` and `supp ρ ⊄ supp σ`.
pub fn trace_term(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<ExtendedReal> {
    check_same_space(rho, sigma)?;
    check_divergence_order(alpha)?;
    if alpha > 1.0 && support_violated(rho, sigma) {
        return Ok(ExtendedReal::PosInfinity);
    }
    Ok(ExtendedReal::Finite(trace_power_pair(rho.eigen(), alpha, sigma.eigen(), 1.0 - alpha)))
}

/// `Q_α(ρ‖σ) = sign(α − 1) Tr ρ^α σ^{1−α}` (zero at `α = 1`).
pub fn quasi_relative(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<ExtendedReal> {
    Ok(match trace_term(rho, sigma, alpha)? {
        ExtendedReal::Finite(t) => {
            let sign = if alpha > 1.0 {
                1.0
            } else if alpha < 1.0 {
                -1.0
            } else {
                0.0
            };
            ExtendedReal::Finite(sign * t)
        }
        inf => inf,
    })
}

/// Umegaki relative entropy `Tr ρ (log ρ − log σ)`; `+∞` on support violation.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ExtendedReal> {
    check_same_space(rho, sigma)?;
    if support_violated(rho, sigma) {
        return Ok(ExtendedReal::PosInfinity);
    }
    let r = clipped(rho.eigen());
    let s = clipped(sigma.eigen());
    let ov = overlaps(rho.eigen(), sigma.eigen());
    let mut acc = CompensatedSum::new();
    for (i, &ri) in r.iter().enumerate() {
        if ri == 0.0 {
            continue;
        }
        acc.add(ri * ri.log2());
        for (j, &sj) in s.iter().enumerate() {
            if sj > 0.0 {
                acc.add(-ri * ov[(i, j)].norm_sqr() * sj.log2());
            }
        }
    }
    Ok(ExtendedReal::Finite(acc.value()))
}

/// Petz–Rényi divergence `S_α(ρ‖σ) = log Tr ρ^α σ^{1−α} / (α − 1)`.
///
/// `α = 1` is the relative entropy. For `α > 1` a support violation gives
/// `+∞`; for `α < 1` so does a vanishing trace (orthogonal supports).
pub fn renyi_relative(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<ExtendedReal> {
    check_divergence_order(alpha)?;
    if alpha == 1.0 {
        return relative_entropy(rho, sigma);
    }
    Ok(match trace_term(rho, sigma, alpha)? {
        ExtendedReal::PosInfinity => ExtendedReal::PosInfinity,
        ExtendedReal::Finite(t) => ExtendedReal::from_f64(t.log2() / (alpha - 1.0)),
    })
}

/// `Tr_right (ρ^α)` with `ρ` ordered as `left ⊗ right`.
fn traced_power(rho: &DensityMatrix, split: &BipartiteSplit, alpha: f64) -> Result<(CMatrix, SubsystemDims)> {
    let ordered = rho.split_ordered(split)?;
    let (left, right) = split.side_dims(rho.dims())?;
    let m = linalg::trace_out_second(&ordered.power(alpha), left.total_dim(), right.total_dim());
    Ok((linalg::hermitize(&m), left))
}

/// `log Tr X^{1/α}` from the spectrum of `X`, factoring out `x_max`.
fn log_trace_root(x: &[f64], alpha: f64) -> f64 {
    let xmax = x.iter().copied().fold(0.0, f64::max);
    if !(xmax > 0.0) {
        return f64::NEG_INFINITY;
    }
    let cut = linalg::zero_cutoff(x.len(), xmax);
    let mut acc = CompensatedSum::new();
    for &xi in x {
        if xi > cut {
            acc.add((xi / xmax).powf(1.0 / alpha));
        }
    }
    xmax.log2() / alpha + acc.value().log2()
}

/// Rényi coherent information
/// `I_α(A⟩B) = α/(α−1) · log Tr [Tr_B ρ^α]^{1/α}`, where `A` is the left
/// side of `split` (kept) and `B` the right side (traced out).
///
/// At `α = 1` this is the limit `S(A) − S(AB)`; at `α = 0` it is
/// `−log λ_max(Tr_B Π_ρ)`.
pub fn coherent_information_renyi(rho: &DensityMatrix, split: &BipartiteSplit, alpha: f64) -> Result<f64> {
    check_divergence_order(alpha)?;
    if alpha == 1.0 {
        let a = rho.partial_trace(&split.left_labels())?;
        return Ok(von_neumann(&a) - von_neumann(rho));
    }
    let (x, _) = traced_power(rho, split, alpha)?;
    let spectrum = linalg::herm_eigen(&x).values;
    if alpha == 0.0 {
        let xmax = spectrum.iter().copied().fold(0.0, f64::max);
        return Ok(-xmax.log2());
    }
    Ok(alpha / (alpha - 1.0) * log_trace_root(&spectrum, alpha))
}

/// `S(AB) − S(B)` with `A` the left side of `split`.
pub fn conditional_entropy(rho: &DensityMatrix, split: &BipartiteSplit) -> Result<f64> {
    let b = rho.partial_trace(&split.right_labels())?;
    Ok(von_neumann(rho) - von_neumann(&b))
}

/// `S(A) + S(B) − S(AB)`.
pub fn mutual_information(rho: &DensityMatrix, split: &BipartiteSplit) -> Result<f64> {
    let a = rho.partial_trace(&split.left_labels())?;
    let b = rho.partial_trace(&split.right_labels())?;
    Ok(von_neumann(&a) + von_neumann(&b) - von_neumann(rho))
}

/// The optimal `σ^A` in `min_σ S_α(ρ^{AB} ‖ σ^A ⊗ I^B)` and the minimum,
/// which equals [`coherent_information_renyi`]:
/// `σ* = X^{1/α} / Tr X^{1/α}` with `X = Tr_B ρ^α`.
pub fn sibson_minimizer(rho: &DensityMatrix, split: &BipartiteSplit, alpha: f64) -> Result<(DensityMatrix, f64)> {
    check_divergence_order(alpha)?;
    if alpha == 1.0 {
        return Err(Error::AlphaOutOfRange { alpha, range: "[0, 2] \\ {1}" });
    }
    let (x, left) = traced_power(rho, split, alpha)?;
    let eig = linalg::herm_eigen(&x);
    let value = coherent_information_renyi(rho, split, alpha)?;
    let xmax = eig.lambda_max();
    let cut = eig.cutoff();
    let sigma = if alpha == 0.0 {
        // limit of X^{1/α}: the top eigenspace
        eig.reassemble(|v| if v >= xmax * (1.0 - 1e-12) { 1.0 } else { 0.0 })
    } else {
        eig.reassemble(|v| if v > cut { (v / xmax).powf(1.0 / alpha) } else { 0.0 })
    };
    let tr = linalg::trace(&sigma).re;
    let sigma = DensityMatrix::validate(sigma.unscale(tr), left, Tolerances::default())?;
    Ok((sigma, value))
}

/// `(1/(α−1)) log Tr [Tr_B ρ^α] σ^{1−α}`, i.e. `S_α(ρ^{AB} ‖ σ^A ⊗ I^B)`.
pub fn sibson_objective(
    rho: &DensityMatrix,
    split: &BipartiteSplit,
    sigma_a: &DensityMatrix,
    alpha: f64,
) -> Result<ExtendedReal> {
    check_divergence_order(alpha)?;
    if alpha == 1.0 {
        return Err(Error::AlphaOutOfRange { alpha, range: "[0, 2] \\ {1}" });
    }
    let (x, left) = traced_power(rho, split, alpha)?;
    if left.total_dim() != sigma_a.dim() {
        return Err(Error::DimensionMismatch { expected: left.total_dim(), found: sigma_a.dim() });
    }
    let xe = linalg::herm_eigen(&x);
    if alpha > 1.0 && weight_outside(&xe, sigma_a.eigen()) > xe.cutoff().max(f64::EPSILON) {
        return Ok(ExtendedReal::PosInfinity);
    }
    let t = trace_power_pair(&xe, 1.0, sigma_a.eigen(), 1.0 - alpha);
    Ok(ExtendedReal::from_f64(t.log2() / (alpha - 1.0)))
}
