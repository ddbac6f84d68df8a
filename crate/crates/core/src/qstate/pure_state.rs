use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::SVD;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use super::density::{DensityMatrix, Tolerances};
use super::dims::{BipartiteSplit, SubsystemDims};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::{Error, Result};

/// A normalized state vector over named registers.
#[derive(Debug, Clone)]
pub struct PureState {
    dims: SubsystemDims,
    amplitudes: CVector,
}

impl PureState {
    /// Validate the norm (within `1e-9`) and normalize exactly.
    pub fn new(amplitudes: CVector, dims: SubsystemDims) -> Result<Self> {
        Self::with_tolerance(amplitudes, dims, Tolerances::default().trace)
    }

    pub fn with_tolerance(amplitudes: CVector, dims: SubsystemDims, trace_tol: f64) -> Result<Self> {
        if amplitudes.len() != dims.total_dim() {
            return Err(Error::DimensionMismatch { expected: dims.total_dim(), found: amplitudes.len() });
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > trace_tol {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(Self { dims, amplitudes: amplitudes.unscale(norm) })
    }

    /// Normalizes any nonzero vector.
    pub fn normalized(amplitudes: CVector, dims: SubsystemDims) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.unscale(norm), dims)
    }

    /// Computational basis state.
    pub fn basis(dims: SubsystemDims, index: usize) -> Result<Self> {
        let d = dims.total_dim();
        if index >= d {
            return Err(Error::InvalidArgument("basis index out of range".into()));
        }
        let mut v = CVector::zeros(d);
        v[index] = c(1.0, 0.0);
        Self::new(v, dims)
    }

    /// `Σ_i √p_i |i⟩|i⟩` on `A(k) ⊗ B(k)`.
    pub fn schmidt_form(probs: &[f64]) -> Result<Self> {
        let k = probs.len();
        if k == 0 || probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidArgument("Schmidt weights must be nonnegative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotUnitTrace((total - 1.0).abs()));
        }
        let mut v = CVector::zeros(k * k);
        for (i, &p) in probs.iter().enumerate() {
            v[i * k + i] = c((p / total).sqrt(), 0.0);
        }
        Self::normalized(v, SubsystemDims::ab(k, k)?)
    }

    /// `Φ_K = K^{-1/2} Σ_i |i⟩|i⟩`.
    pub fn maximally_entangled(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("Schmidt rank must be positive".into()));
        }
        let p = alloc::vec![1.0 / k as f64; k];
        Self::schmidt_form(&p)
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn relabeled(&self, map: &[(&str, &str)]) -> Result<Self> {
        Ok(Self { dims: self.dims.relabel(map)?, amplitudes: self.amplitudes.clone() })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_psd(linalg::outer(&self.amplitudes), self.dims.clone(), Tolerances::default())
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            dims: self.dims.concat(&other.dims),
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    pub fn permuted(&self, labels: &[&str]) -> Result<PureState> {
        if labels.len() != self.dims.len() {
            return Err(Error::InvalidArgument("permutation must list every register".into()));
        }
        let order = labels.iter().map(|l| self.dims.index_of(l)).collect::<Result<Vec<_>>>()?;
        let dims = SubsystemDims::new(order.iter().map(|&i| self.dims.factors()[i].clone()))?;
        let map = linalg::permutation_map(&self.dims.sizes(), &order);
        Ok(PureState { dims, amplitudes: linalg::permute_vector(&self.amplitudes, &map) })
    }

    /// Amplitudes reshaped into a `d_left × d_right` matrix.
    fn reshaped(&self, split: &BipartiteSplit) -> Result<(CMatrix, SubsystemDims, SubsystemDims)> {
        let order = split.order(&self.dims)?;
        let (l, r) = split.side_dims(&self.dims)?;
        let map = linalg::permutation_map(&self.dims.sizes(), &order);
        let v = linalg::permute_vector(&self.amplitudes, &map);
        let (dl, dr) = (l.total_dim(), r.total_dim());
        Ok((CMatrix::from_fn(dl, dr, |i, j| v[i * dr + j]), l, r))
    }

    /// Reduced state on `keep`, via `M M†` on the reshaped amplitudes.
    pub fn marginal(&self, keep: &[&str]) -> Result<DensityMatrix> {
        let kept = self.dims.select(keep)?;
        if kept.len() == self.dims.len() {
            return Ok(self.density());
        }
        let keep_labels: Vec<&str> = kept.labels().collect();
        let split = BipartiteSplit::new(&self.dims, &keep_labels)?;
        let (m, l, _) = self.reshaped(&split)?;
        Ok(DensityMatrix::from_psd(&m * m.adjoint(), l, Tolerances::default()))
    }

    /// Schmidt decomposition across `split`.
    pub fn schmidt(&self, split: &BipartiteSplit) -> Result<SchmidtForm> {
        let (m, l, r) = self.reshaped(split)?;
        let svd = SVD::new(m, true, true);
        let u = svd.u.as_ref().expect("left singular vectors requested");
        let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let dim = self.dim();
        // squared coefficients are eigenvalues of the marginal: same cutoff rule
        let cut = linalg::zero_cutoff(dim, smax * smax);
        let mut terms: Vec<(f64, CVector, CVector)> = Vec::new();
        for k in 0..svd.singular_values.len() {
            let s = svd.singular_values[k];
            if s * s <= cut {
                continue;
            }
            let mut left: CVector = u.column(k).into_owned();
            let mut right: CVector = v_t.row(k).transpose();
            // fix the phase of the left vector; the right one absorbs the conjugate
            let before = left.clone();
            linalg::phase_fix(&mut left);
            let idx = (0..left.len()).find(|&i| before[i].norm() > 0.0).unwrap_or(0);
            let phase = if before[idx].norm() > 0.0 { left[idx] / before[idx] } else { c(1.0, 0.0) };
            right *= phase.conj();
            terms.push((s, left, right));
        }
        terms.sort_by(|a, b| {
            let rel = (a.0 - b.0).abs() / smax.max(f64::MIN_POSITIVE);
            if rel > 1e-10 {
                b.0.total_cmp(&a.0)
            } else {
                lexicographic(&a.1, &b.1)
            }
        });
        let coefficients: Vec<f64> = terms.iter().map(|t| t.0).collect();
        let norm: f64 = coefficients.iter().map(|s| s * s).sum::<f64>().sqrt();
        Ok(SchmidtForm {
            coefficients: coefficients.iter().map(|s| s / norm).collect(),
            left_basis: terms.iter().map(|t| t.1.clone()).collect(),
            right_basis: terms.iter().map(|t| t.2.clone()).collect(),
            left_dims: l,
            right_dims: r,
        })
    }
}

fn lexicographic(a: &CVector, b: &CVector) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o = y.norm().total_cmp(&x.norm()).then(y.re.total_cmp(&x.re)).then(y.im.total_cmp(&x.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// `|ψ⟩ = Σ_k s_k |u_k⟩|v_k⟩`, coefficients nonincreasing and strictly positive.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<CVector>,
    pub right_basis: Vec<CVector>,
    pub left_dims: SubsystemDims,
    pub right_dims: SubsystemDims,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Squared coefficients.
    pub fn probabilities(&self) -> Vec<f64> {
        self.coefficients.iter().map(|s| s * s).collect()
    }

    /// Rebuild the state vector in `left ⊗ right` order.
    pub fn reconstruct(&self) -> Result<PureState> {
        let dims = self.left_dims.concat(&self.right_dims);
        let mut v = CVector::zeros(dims.total_dim());
        for ((s, u), w) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            v += linalg::kron_vec(u, w).scale(*s);
        }
        PureState::new(v, dims)
    }
}

/// Canonical purification `Σ_i √λ_i |i⟩_R |v_i⟩` with `dim R = rank ρ`.
///
/// The purifying register is labeled `R` (primed if taken) and comes first.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let rank = rho.rank().max(1);
    let eig = rho.eigen();
    let d = rho.dim();
    let mut v = CVector::zeros(rank * d);
    for i in 0..rank {
        let w = eig.values[i].max(0.0).sqrt();
        for a in 0..d {
            v[i * d + a] = eig.vectors[(a, i)] * w;
        }
    }
    let r_label = rho.dims().fresh_label("R");
    let r = SubsystemDims::single(&r_label, rank).expect("rank >= 1");
    let dims = r.concat(rho.dims());
    let norm = v.norm();
    PureState { dims, amplitudes: v.unscale(norm) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::fidelity;

    #[test]
    fn schmidt_of_maximally_entangled() {
        for k in 2..=4 {
            let phi = PureState::maximally_entangled(k).unwrap();
            let split = BipartiteSplit::new(phi.dims(), &["A"]).unwrap();
            let s = phi.schmidt(&split).unwrap();
            assert_eq!(s.rank(), k);
            for c in &s.coefficients {
                assert!((c - 1.0 / (k as f64).sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn schmidt_of_product_and_weighted() {
        let prod = PureState::basis(SubsystemDims::ab(2, 3).unwrap(), 4).unwrap();
        let split = BipartiteSplit::new(prod.dims(), &["A"]).unwrap();
        let s = prod.schmidt(&split).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);

        let psi = PureState::schmidt_form(&[0.8, 0.2]).unwrap();
        let s = psi.schmidt(&BipartiteSplit::new(psi.dims(), &["A"]).unwrap()).unwrap();
        assert!((s.coefficients[0] - 0.894427190999916).abs() < 1e-12);
        assert!((s.coefficients[1] - 0.447213595499958).abs() < 1e-12);
        let back = s.reconstruct().unwrap();
        let overlap = (back.amplitudes().adjoint() * psi.amplitudes())[(0, 0)].norm();
        assert!((overlap - 1.0).abs() < 1e-12);
    }

    #[test]
    fn purify_examples() {
        let rho = DensityMatrix::diagonal(SubsystemDims::single("A", 2).unwrap(), &[0.9, 0.1]).unwrap();
        let psi = purify(&rho);
        let labels: Vec<&str> = psi.dims().labels().collect();
        assert_eq!(labels, ["R", "A"]);
        let a = psi.amplitudes();
        assert!((a[0].re - 0.9f64.sqrt()).abs() < 1e-12);
        assert!((a[3].re - 0.1f64.sqrt()).abs() < 1e-12);
        assert!(a[1].norm() < 1e-12 && a[2].norm() < 1e-12);

        let pure = PureState::basis(SubsystemDims::single("A", 3).unwrap(), 1).unwrap().density();
        assert_eq!(purify(&pure).dims().dim_of("R").unwrap(), 1);

        let mixed = DensityMatrix::maximally_mixed(SubsystemDims::single("A", 3).unwrap());
        let psi = purify(&mixed);
        let split = BipartiteSplit::new(psi.dims(), &["R"]).unwrap();
        let s = psi.schmidt(&split).unwrap();
        assert_eq!(s.rank(), 3);
        let back = psi.marginal(&["A"]).unwrap();
        assert!((fidelity(&back, &mixed).unwrap() - 1.0).abs() < 1e-12);
    }
}
