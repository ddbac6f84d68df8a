//! Dense complex linear algebra shared by every module.
//!
//! Matrices are `nalgebra` dense matrices of `Complex64`. Flat tensor-product
//! indices are row-major over registers: the first register is the most
//! significant digit, matching `kronecker`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;


pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative eigenvalue cutoff per unit of dimension; see [`zero_cutoff`].
pub const ZERO_CUTOFF_PER_DIM: f64 = 1e-12;

pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Eigenvalues below this are treated as exactly zero: `dim * 1e-12 * λ_max`.
pub fn zero_cutoff(dim: usize, lambda_max: f64) -> f64 {
    dim as f64 * ZERO_CUTOFF_PER_DIM * lambda_max.max(0.0)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in nonincreasing order.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix,
}

impl HermEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn cutoff(&self) -> f64 {
        zero_cutoff(self.dim(), self.lambda_max())
    }

    /// `V diag(f(λ)) V†`.
    pub fn reassemble(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            let w = f(self.values[k]);
            for r in 0..n {
                scaled[(r, k)] *= w;
            }
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Largest entry of `|M - M†|`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Hermitian eigendecomposition. The input is symmetrized first; each
/// eigenvector is phase-fixed so its largest-magnitude entry is real positive.
pub fn herm_eigen(m: &CMatrix) -> HermEigen {
    let n = m.nrows();
    if n == 0 {
        return HermEigen { values: Vec::new(), vectors: CMatrix::zeros(0, 0) };
    }
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col: CVector = eig.eigenvectors.column(src).into_owned();
        phase_fix(&mut col);
        vectors.set_column(dst, &col);
    }
    HermEigen { values, vectors }
}

/// Multiply `v` by a unit phase so that its largest-magnitude entry (first one
/// on ties) is real and positive.
pub fn phase_fix(v: &mut CVector) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in v.iter().enumerate() {
        let n = z.norm();
        if n > best_norm * (1.0 + 1e-12) {
            best = i;
            best_norm = n;
        }
    }
    if best_norm > 0.0 {
        let phase = v[best].conj() / best_norm;
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().copied().sum()
}

/// Real part of `Tr(A B)` without forming the product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i * b.len() + j] = x * y;
        }
    }
    out
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn from_real_diagonal(diag: &[f64]) -> CMatrix {
    let n = diag.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, &d) in diag.iter().enumerate() {
        m[(i, i)] = c(d, 0.0);
    }
    m
}

/// Largest entry of `|A - B|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// For registers of sizes `dims` reordered by `order` (a permutation of
/// `0..dims.len()`), returns `map` with `map[new_flat] = old_flat`.
pub fn permutation_map(dims: &[usize], order: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let m = dims.len();
    // stride of each original register in the old flat index
    let mut old_stride = alloc::vec![1usize; m];
    for r in (0..m.saturating_sub(1)).rev() {
        old_stride[r] = old_stride[r + 1] * dims[r + 1];
    }
    let new_dims: Vec<usize> = order.iter().map(|&r| dims[r]).collect();
    let mut map = alloc::vec![0usize; total];
    let mut digits = alloc::vec![0usize; m];
    for (new_flat, slot) in map.iter_mut().enumerate() {
        let mut rem = new_flat;
        for p in (0..m).rev() {
            digits[p] = rem % new_dims[p];
            rem /= new_dims[p];
        }
        *slot = order.iter().zip(digits.iter()).map(|(&r, &d)| d * old_stride[r]).sum();
    }
    map
}

pub fn permute_matrix(m: &CMatrix, map: &[usize]) -> CMatrix {
    let n = map.len();
    CMatrix::from_fn(n, n, |i, j| m[(map[i], map[j])])
}

pub fn permute_vector(v: &CVector, map: &[usize]) -> CVector {
    CVector::from_fn(map.len(), |i, _| v[map[i]])
}

/// Partial trace of a `(d_keep * d_traced)`-square matrix whose kept factor is
/// the more significant one.
pub fn trace_out_second(m: &CMatrix, d_keep: usize, d_traced: usize) -> CMatrix {
    CMatrix::from_fn(d_keep, d_keep, |i, j| {
        (0..d_traced).map(|t| m[(i * d_traced + t, j * d_traced + t)]).sum()
    })
}

/// Partial trace over the more significant factor.
pub fn trace_out_first(m: &CMatrix, d_traced: usize, d_keep: usize) -> CMatrix {
    CMatrix::from_fn(d_keep, d_keep, |i, j| {
        (0..d_traced).map(|t| m[(t * d_keep + i, t * d_keep + j)]).sum()
    })
}

