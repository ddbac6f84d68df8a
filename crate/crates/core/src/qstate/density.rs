use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use super::dims::{BipartiteSplit, SubsystemDims};
use crate::linalg::{self, CMatrix, HermEigen};
use crate::{Error, Result};

/// Validation tolerances. All default to `1e-9`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { herm: 1e-9, psd: 1e-9, trace: 1e-9 }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self { herm: tol, psd: tol, trace: tol }
    }
}

/// A validated density matrix: Hermitian, PSD and unit trace, with its
/// eigendecomposition cached at construction.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dims: SubsystemDims,
    matrix: CMatrix,
    eigen: HermEigen,
    tol: Tolerances,
}

impl DensityMatrix {
    /// Validate with default tolerances.
    pub fn new(matrix: CMatrix, dims: SubsystemDims) -> Result<Self> {
        Self::validate(matrix, dims, Tolerances::default())
    }

    /// Check Hermiticity, positivity and trace. Eigenvalues in `[-psd, 0)` are
    /// clipped to zero and the matrix renormalized.
    pub fn validate(matrix: CMatrix, dims: SubsystemDims, tol: Tolerances) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        if matrix.nrows() != dims.total_dim() {
            return Err(Error::DimensionMismatch { expected: dims.total_dim(), found: matrix.nrows() });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let defect = linalg::hermitian_defect(&matrix);
        if defect > tol.herm {
            return Err(Error::NotHermitian(defect));
        }
        let matrix = linalg::hermitize(&matrix);
        let eigen = linalg::herm_eigen(&matrix);
        let min = eigen.values.last().copied().unwrap_or(0.0);
        if min < -tol.psd {
            return Err(Error::NotPsd(min));
        }
        let tr: f64 = eigen.values.iter().sum();
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::NotUnitTrace((tr - 1.0).abs()));
        }
        Ok(Self::from_parts(matrix, eigen, dims, tol))
    }

    fn from_parts(matrix: CMatrix, mut eigen: HermEigen, dims: SubsystemDims, tol: Tolerances) -> Self {
        let clipped = eigen.values.iter().any(|&v| v < 0.0);
        for v in eigen.values.iter_mut() {
            *v = v.max(0.0);
        }
        let tr: f64 = eigen.values.iter().sum();
        if clipped {
            for v in eigen.values.iter_mut() {
                *v /= tr;
            }
            let matrix = eigen.reassemble(|l| l);
            return Self { dims, matrix, eigen, tol };
        }
        let matrix = if tr != 1.0 {
            for v in eigen.values.iter_mut() {
                *v /= tr;
            }
            matrix.unscale(tr)
        } else {
            matrix
        };
        Self { dims, matrix, eigen, tol }
    }

    /// Unchecked construction for matrices that are PSD by construction
    /// (products, partial traces, Kraus images). Still normalizes and clips.
    pub(crate) fn from_psd(matrix: CMatrix, dims: SubsystemDims, tol: Tolerances) -> Self {
        let matrix = linalg::hermitize(&matrix);
        let eigen = linalg::herm_eigen(&matrix);
        Self::from_parts(matrix, eigen, dims, tol)
    }

    /// `I/d` over `dims`.
    pub fn maximally_mixed(dims: SubsystemDims) -> Self {
        let d = dims.total_dim();
        let m = linalg::identity(d).unscale(d as f64);
        Self::from_psd(m, dims, Tolerances::default())
    }

    /// Diagonal state in the computational basis.
    pub fn diagonal(dims: SubsystemDims, probs: &[f64]) -> Result<Self> {
        Self::new(linalg::from_real_diagonal(probs), dims)
    }

    pub fn dims(&self) -> &SubsystemDims {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    /// Eigenvalues, nonincreasing, clipped to be nonnegative.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn eigen(&self) -> &HermEigen {
        &self.eigen
    }

    /// Eigenvalues at or below this are treated as zero.
    pub fn zero_cutoff(&self) -> f64 {
        self.eigen.cutoff()
    }

    pub fn rank(&self) -> usize {
        let cut = self.zero_cutoff();
        self.eigen.values.iter().filter(|&&l| l > cut).count()
    }

    pub fn is_pure(&self) -> bool {
        self.rank() == 1
    }

    /// `ρ^p` with the generalized-inverse convention `0^p = 0`.
    pub fn power(&self, p: f64) -> CMatrix {
        power_from_eigen(&self.eigen, p)
    }

    pub fn support_projector(&self) -> CMatrix {
        let cut = self.zero_cutoff();
        self.eigen.reassemble(|l| if l > cut { 1.0 } else { 0.0 })
    }

    /// Same state with registers renamed.
    pub fn relabeled(&self, map: &[(&str, &str)]) -> Result<Self> {
        Ok(Self { dims: self.dims.relabel(map)?, ..self.clone() })
    }

    /// Kronecker product; registers of `other` follow those of `self`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let dims = self.dims.concat(&other.dims);
        DensityMatrix::from_psd(linalg::kron(&self.matrix, &other.matrix), dims, self.tol)
    }

    /// `ρ^{⊗n}`.
    pub fn tensor_power(&self, n: usize) -> Result<DensityMatrix> {
        if n == 0 {
            return Err(Error::InvalidArgument("tensor power needs n >= 1".into()));
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self);
        }
        Ok(out)
    }

    /// Reorder registers; `labels` must list every register once.
    pub fn permuted(&self, labels: &[&str]) -> Result<DensityMatrix> {
        if labels.len() != self.dims.len() {
            return Err(Error::InvalidArgument("permutation must list every register".into()));
        }
        let order = labels.iter().map(|l| self.dims.index_of(l)).collect::<Result<Vec<_>>>()?;
        let dims = SubsystemDims::new(order.iter().map(|&i| self.dims.factors()[i].clone()))?;
        let map = linalg::permutation_map(&self.dims.sizes(), &order);
        let matrix = linalg::permute_matrix(&self.matrix, &map);
        // permutation is unitary: the spectrum is unchanged
        let mut eigen = self.eigen.clone();
        eigen.vectors = CMatrix::from_fn(map.len(), map.len(), |i, k| self.eigen.vectors[(map[i], k)]);
        Ok(DensityMatrix { dims, matrix, eigen, tol: self.tol })
    }

    /// Reduced state on `keep`; kept registers retain their original order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidArgument("partial trace must keep at least one register".into()));
        }
        for l in keep {
            self.dims.index_of(l)?;
        }
        let kept = self.dims.select(keep)?;
        if kept.len() == self.dims.len() {
            return Ok(self.clone());
        }
        let mut order: Vec<usize> = Vec::new();
        let mut traced: Vec<usize> = Vec::new();
        for (i, (l, _)) in self.dims.factors().iter().enumerate() {
            if keep.contains(&l.as_str()) {
                order.push(i);
            } else {
                traced.push(i);
            }
        }
        let d_keep = kept.total_dim();
        let d_traced = self.dim() / d_keep;
        order.extend(traced);
        let map = linalg::permutation_map(&self.dims.sizes(), &order);
        let permuted = linalg::permute_matrix(&self.matrix, &map);
        let reduced = linalg::trace_out_second(&permuted, d_keep, d_traced);
        Ok(DensityMatrix::from_psd(reduced, kept, self.tol))
    }

    /// Matrix in `left ⊗ right` register order with the two side dimensions.
    pub fn bipartite(&self, split: &BipartiteSplit) -> Result<(CMatrix, SubsystemDims, SubsystemDims)> {
        let order = split.order(&self.dims)?;
        let (l, r) = split.side_dims(&self.dims)?;
        let map = linalg::permutation_map(&self.dims.sizes(), &order);
        Ok((linalg::permute_matrix(&self.matrix, &map), l, r))
    }

    /// Same state with registers reordered as `left ++ right`.
    pub fn split_ordered(&self, split: &BipartiteSplit) -> Result<DensityMatrix> {
        let mut labels = split.left_labels();
        labels.extend(split.right_labels());
        self.permuted(&labels)
    }
}

fn power_from_eigen(eigen: &HermEigen, p: f64) -> CMatrix {
    let cut = eigen.cutoff();
    eigen.reassemble(|l| if l > cut { l.powf(p) } else { 0.0 })
}

/// `H^p` for a Hermitian PSD matrix. Eigenvalues at or below the zero cutoff
/// map to 0 for every `p` (generalized inverse for `p < 0`).
pub fn matrix_power(h: &CMatrix, p: f64, tol: Tolerances) -> Result<CMatrix> {
    if h.nrows() != h.ncols() {
        return Err(Error::NotSquare { rows: h.nrows(), cols: h.ncols() });
    }
    if !p.is_finite() {
        return Err(Error::InvalidArgument("matrix power exponent must be finite".into()));
    }
    let defect = linalg::hermitian_defect(h);
    if defect > tol.herm {
        return Err(Error::NotHermitian(defect));
    }
    let eigen = linalg::herm_eigen(h);
    let min = eigen.values.last().copied().unwrap_or(0.0);
    if min < -tol.psd {
        return Err(Error::NegativeEigenvalue(min));
    }
    Ok(power_from_eigen(&eigen, p))
}

/// Uhlmann fidelity `‖√ρ √σ‖₁`, as the sum of singular values (taking
/// square roots of `√σ ρ √σ`'s eigenvalues would amplify their rounding
/// noise to `~1e-8`).
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let product = rho.power(0.5) * sigma.power(0.5);
    let singular = product.singular_values();
    Ok(singular.iter().sum::<f64>().clamp(0.0, 1.0))
}

/// Fidelity against a pure state: `√⟨ψ|ρ|ψ⟩`.
pub fn fidelity_with_pure(amplitudes: &linalg::CVector, rho: &DensityMatrix) -> Result<f64> {
    if amplitudes.len() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: amplitudes.len() });
    }
    let overlap = (amplitudes.adjoint() * rho.matrix() * amplitudes)[(0, 0)].re;
    Ok(overlap.max(0.0).sqrt().min(1.0))
}
