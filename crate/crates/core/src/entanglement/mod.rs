//! Rényi relative entropy of entanglement
//! `E_α(A:B)_ρ = inf_{σ separable} S_α(ρ‖σ)`.
//!
//! The infimum itself is not computable in general. This module provides the
//! coherent-information lower bound, the pure-state sandwich, a
//! fidelity-perturbed lower bound, and [`rree_estimate`], a feasible-point
//! optimizer whose output is always an upper bound.

mod estimator;

use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use crate::entropy::{self, renyi_entropy};
use crate::linalg::{self, CMatrix, CVector};
use crate::qstate::{fidelity, fidelity_with_pure, BipartiteSplit, DensityMatrix, PureState, SubsystemDims};
use crate::{Error, Result};

pub use estimator::{rree_estimate, RestartOutcome, RreeConfig, RreeEstimate, RreeProblem};

/// One term `w |a⟩⟨a| ⊗ |b⟩⟨b|` of a separable state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub weight: f64,
    pub a_vec: CVector,
    pub b_vec: CVector,
}

/// An explicit convex mixture of product pure states on `left ⊗ right`.
#[derive(Debug, Clone)]
pub struct SeparableDecomposition {
    left: SubsystemDims,
    right: SubsystemDims,
    terms: Vec<ProductTerm>,
}

const DECOMPOSITION_TOL: f64 = 1e-9;

impl SeparableDecomposition {
    /// Weights must be nonnegative and sum to 1, vectors must be unit, both
    /// within `1e-9`.
    pub fn new(left: SubsystemDims, right: SubsystemDims, terms: Vec<ProductTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("separable decomposition has no terms".into()));
        }
        let mut total = 0.0;
        for t in &terms {
            if t.a_vec.len() != left.total_dim() {
                return Err(Error::DimensionMismatch { expected: left.total_dim(), found: t.a_vec.len() });
            }
            if t.b_vec.len() != right.total_dim() {
                return Err(Error::DimensionMismatch { expected: right.total_dim(), found: t.b_vec.len() });
            }
            if !(t.weight >= 0.0) || !t.weight.is_finite() {
                return Err(Error::InvalidArgument("separable weights must be nonnegative".into()));
            }
            for v in [&t.a_vec, &t.b_vec] {
                let defect = (v.norm() - 1.0).abs();
                if !(defect <= DECOMPOSITION_TOL) {
                    return Err(Error::NotNormalized(defect));
                }
            }
            total += t.weight;
        }
        if !((total - 1.0).abs() <= DECOMPOSITION_TOL) {
            return Err(Error::NotUnitTrace((total - 1.0).abs()));
        }
        Ok(Self { left, right, terms })
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    pub fn left_dims(&self) -> &SubsystemDims {
        &self.left
    }

    pub fn right_dims(&self) -> &SubsystemDims {
        &self.right
    }

    /// `Σ w_i |a_i⟩⟨a_i| ⊗ |b_i⟩⟨b_i|` over `left ⊗ right`.
    pub fn assemble(&self) -> Result<DensityMatrix> {
        let d = self.left.total_dim() * self.right.total_dim();
        let mut m = CMatrix::zeros(d, d);
        for t in &self.terms {
            let x = linalg::kron_vec(&t.a_vec, &t.b_vec);
            m += linalg::outer(&x).scale(t.weight);
        }
        DensityMatrix::new(linalg::hermitize(&m), self.left.concat(&self.right))
    }
}

/// `max{I_α(A⟩B), I_α(B⟩A)}`, a lower bound on `E_α(A:B)`.
pub fn rree_lower(rho: &DensityMatrix, split: &BipartiteSplit, alpha: f64) -> Result<f64> {
    let ab = entropy::coherent_information_renyi(rho, split, alpha)?;
    let ba = entropy::coherent_information_renyi(rho, &split.swapped(), alpha)?;
    Ok(ab.max(ba))
}

/// `(S_{1/α}(A), S_{2−α}(A))`, which sandwich `E_α(A:B)` for a pure state.
pub fn rree_bounds_pure(psi: &PureState, split: &BipartiteSplit, alpha: f64) -> Result<(f64, f64)> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange { alpha, range: "[0, 2]" });
    }
    let a = psi.marginal(&split.left_labels())?;
    let lower_order = if alpha == 0.0 { f64::INFINITY } else { 1.0 / alpha };
    Ok((renyi_entropy(&a, lower_order)?, renyi_entropy(&a, 2.0 - alpha)?))
}

/// `(2α/(α−1)) log F + S_{1/(2−α)}(A)_ψ`, a lower bound on `E_α(A:B)_ρ`
/// (indeed on `I_α(A⟩B)_ρ`) whenever `F(ψ, ρ) ≥ F`.
pub fn lemma5_lower(
    psi: &PureState,
    rho: &DensityMatrix,
    split: &BipartiteSplit,
    alpha: f64,
    f_val: f64,
) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::AlphaOutOfRange { alpha, range: "(1, 2]" });
    }
    if !(0.0..=1.0).contains(&f_val) {
        return Err(Error::InvalidArgument("fidelity must lie in [0, 1]".into()));
    }
    if psi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), found: rho.dim() });
    }
    let actual = fidelity_with_pure(psi.amplitudes(), rho)?;
    if actual < f_val - 1e-12 {
        return Err(Error::FidelityPreconditionFailed { required: f_val, actual });
    }
    let a = psi.marginal(&split.left_labels())?;
    let order = if alpha == 2.0 { f64::INFINITY } else { 1.0 / (2.0 - alpha) };
    Ok(2.0 * alpha / (alpha - 1.0) * f_val.log2() + renyi_entropy(&a, order)?)
}

/// `S_α(ρ) − S_β(σ) − (2α/(1−α)) log F(ρ,σ)` with `β = α/(2α−1)`; the
/// van Dam–Hayden inequality says this is nonnegative on `α ∈ [1/2, 1)`.
pub fn van_dam_hayden_gap(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    let beta = entropy::beta(alpha)?;
    let f = fidelity(rho, sigma)?;
    let s_a = renyi_entropy(rho, alpha)?;
    let s_b = renyi_entropy(sigma, beta)?;
    Ok(s_a - s_b - 2.0 * alpha / (1.0 - alpha) * f.log2())
}
