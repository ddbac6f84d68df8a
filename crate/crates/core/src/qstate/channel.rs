use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use super::density::{DensityMatrix, Tolerances};
use super::dims::SubsystemDims;
use crate::linalg::{self, c, CMatrix};
use crate::{Error, Result};

fn completeness_defect<'a>(kraus: impl Iterator<Item = &'a CMatrix>, input_dim: usize) -> f64 {
    let mut sum = CMatrix::zeros(input_dim, input_dim);
    for k in kraus {
        sum += k.adjoint() * k;
    }
    linalg::max_abs_diff(&sum, &linalg::identity(input_dim))
}

/// Kraus operators `K_j` acting on all registers of `input_dims`, or on a
/// single register when lifted with [`QuantumChannel::on_register`].
fn lift(kraus: &CMatrix, dims: &SubsystemDims, index: usize) -> CMatrix {
    let sizes = dims.sizes();
    let before: usize = sizes[..index].iter().product();
    let after: usize = sizes[index + 1..].iter().product();
    linalg::kron(&linalg::kron(&linalg::identity(before), kraus), &linalg::identity(after))
}

/// A trace-preserving completely positive map in Kraus form.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    input_dims: SubsystemDims,
    output_dims: SubsystemDims,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    pub fn new(input_dims: SubsystemDims, output_dims: SubsystemDims, kraus: Vec<CMatrix>) -> Result<Self> {
        Self::with_tolerance(input_dims, output_dims, kraus, Tolerances::default().psd)
    }

    pub fn with_tolerance(
        input_dims: SubsystemDims,
        output_dims: SubsystemDims,
        kraus: Vec<CMatrix>,
        psd_tol: f64,
    ) -> Result<Self> {
        let (din, dout) = (input_dims.total_dim(), output_dims.total_dim());
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("channel needs at least one Kraus operator".into()));
        }
        for k in &kraus {
            if k.nrows() != dout || k.ncols() != din {
                return Err(Error::DimensionMismatch { expected: dout * din, found: k.nrows() * k.ncols() });
            }
        }
        let defect = completeness_defect(kraus.iter(), din);
        if defect > psd_tol {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self { input_dims, output_dims, kraus })
    }

    pub fn identity(dims: SubsystemDims) -> Self {
        let d = dims.total_dim();
        Self { input_dims: dims.clone(), output_dims: dims, kraus: alloc::vec![linalg::identity(d)] }
    }

    /// Complete dephasing in the computational basis.
    pub fn dephasing(dims: SubsystemDims) -> Self {
        let d = dims.total_dim();
        let kraus = (0..d)
            .map(|i| {
                let mut k = CMatrix::zeros(d, d);
                k[(i, i)] = c(1.0, 0.0);
                k
            })
            .collect();
        Self { input_dims: dims.clone(), output_dims: dims, kraus }
    }

    /// Trace-and-replace: `X ↦ Tr(X) τ`.
    pub fn replacement(input_dims: SubsystemDims, tau: &DensityMatrix) -> Self {
        let din = input_dims.total_dim();
        let eig = tau.eigen();
        let mut kraus = Vec::new();
        for (k, &mu) in eig.values.iter().enumerate() {
            if mu <= 0.0 {
                continue;
            }
            for i in 0..din {
                let mut op = CMatrix::zeros(tau.dim(), din);
                for r in 0..tau.dim() {
                    op[(r, i)] = eig.vectors[(r, k)] * mu.sqrt();
                }
                kraus.push(op);
            }
        }
        Self { input_dims, output_dims: tau.dims().clone(), kraus }
    }

    /// Depolarizing channel `X ↦ (1-p) X + p Tr(X) I/d`.
    pub fn depolarizing(dims: SubsystemDims, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument("depolarizing parameter must lie in [0, 1]".into()));
        }
        let d = dims.total_dim();
        let mut kraus = alloc::vec![linalg::identity(d).scale((1.0 - p).sqrt())];
        let w = (p / d as f64).sqrt();
        for i in 0..d {
            for j in 0..d {
                let mut k = CMatrix::zeros(d, d);
                k[(i, j)] = c(w, 0.0);
                kraus.push(k);
            }
        }
        Self::new(dims.clone(), dims, kraus)
    }

    pub fn input_dims(&self) -> &SubsystemDims {
        &self.input_dims
    }

    pub fn output_dims(&self) -> &SubsystemDims {
        &self.output_dims
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// This channel acting on one register of `dims`, identity elsewhere. The
    /// target keeps its label and takes the channel's output dimension.
    pub fn on_register(&self, dims: &SubsystemDims, label: &str) -> Result<QuantumChannel> {
        let idx = dims.index_of(label)?;
        if dims.factors()[idx].1 != self.input_dims.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dims.total_dim(),
                found: dims.factors()[idx].1,
            });
        }
        let output_dims = dims.with_dim(label, self.output_dims.total_dim())?;
        let kraus = self.kraus.iter().map(|k| lift(k, dims, idx)).collect();
        Ok(QuantumChannel { input_dims: dims.clone(), output_dims, kraus })
    }

    /// `Σ_j K_j ρ K_j†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.input_dims.total_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dims.total_dim(), found: rho.dim() });
        }
        let dout = self.output_dims.total_dim();
        let mut out = CMatrix::zeros(dout, dout);
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        let dims = if self.input_dims == *rho.dims() || self.input_dims.total_dim() != self.output_dims.total_dim() {
            self.output_dims.clone()
        } else {
            rho.dims().clone()
        };
        Ok(DensityMatrix::from_psd(out, dims, rho.tolerances()))
    }
}

/// One outcome of an instrument: probability and normalized post-measurement state.
#[derive(Debug, Clone)]
pub struct InstrumentOutcome {
    pub branch: usize,
    pub probability: f64,
    pub state: DensityMatrix,
}

/// A family of completely positive maps whose sum is trace preserving.
#[derive(Debug, Clone)]
pub struct QuantumInstrument {
    input_dims: SubsystemDims,
    output_dims: SubsystemDims,
    branches: Vec<Vec<CMatrix>>,
}

/// Outcomes less likely than this are dropped by default.
pub const DEFAULT_P_FLOOR: f64 = 1e-12;

impl QuantumInstrument {
    pub fn new(input_dims: SubsystemDims, output_dims: SubsystemDims, branches: Vec<Vec<CMatrix>>) -> Result<Self> {
        let (din, dout) = (input_dims.total_dim(), output_dims.total_dim());
        if branches.is_empty() || branches.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidArgument("instrument branches need Kraus operators".into()));
        }
        for k in branches.iter().flatten() {
            if k.nrows() != dout || k.ncols() != din {
                return Err(Error::DimensionMismatch { expected: dout * din, found: k.nrows() * k.ncols() });
            }
        }
        let defect = completeness_defect(branches.iter().flatten(), din);
        if defect > Tolerances::default().psd {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self { input_dims, output_dims, branches })
    }

    /// Projective measurement in the computational basis.
    pub fn computational_measurement(dims: SubsystemDims) -> Self {
        let d = dims.total_dim();
        let branches = (0..d)
            .map(|i| {
                let mut k = CMatrix::zeros(d, d);
                k[(i, i)] = c(1.0, 0.0);
                alloc::vec![k]
            })
            .collect();
        Self { input_dims: dims.clone(), output_dims: dims, branches }
    }

    pub fn branches(&self) -> &[Vec<CMatrix>] {
        &self.branches
    }

    pub fn input_dims(&self) -> &SubsystemDims {
        &self.input_dims
    }

    /// Acting on one register of `dims` (unilocal), identity elsewhere.
    pub fn on_register(&self, dims: &SubsystemDims, label: &str) -> Result<QuantumInstrument> {
        let idx = dims.index_of(label)?;
        if dims.factors()[idx].1 != self.input_dims.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dims.total_dim(),
                found: dims.factors()[idx].1,
            });
        }
        let output_dims = dims.with_dim(label, self.output_dims.total_dim())?;
        let branches = self.branches.iter().map(|b| b.iter().map(|k| lift(k, dims, idx)).collect()).collect();
        Ok(QuantumInstrument { input_dims: dims.clone(), output_dims, branches })
    }

    /// `(p_k, θ_k)` with `p_k = Tr ℰ_k(ρ)`, `θ_k = ℰ_k(ρ)/p_k`. Branches with
    /// `p_k < p_floor` are dropped and the rest renormalized.
    pub fn apply(&self, rho: &DensityMatrix, p_floor: f64) -> Result<Vec<InstrumentOutcome>> {
        if rho.dim() != self.input_dims.total_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dims.total_dim(), found: rho.dim() });
        }
        let dout = self.output_dims.total_dim();
        let mut raw = Vec::new();
        for (branch, kraus) in self.branches.iter().enumerate() {
            let mut out = CMatrix::zeros(dout, dout);
            for k in kraus {
                out += k * rho.matrix() * k.adjoint();
            }
            let p = linalg::trace(&out).re;
            if p >= p_floor && p > 0.0 {
                raw.push((branch, p, out));
            }
        }
        let total: f64 = raw.iter().map(|r| r.1).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidArgument("every instrument branch has negligible probability".into()));
        }
        Ok(raw
            .into_iter()
            .map(|(branch, p, m)| InstrumentOutcome {
                branch,
                probability: p / total,
                state: DensityMatrix::from_psd(m.unscale(p), self.output_dims.clone(), rho.tolerances()),
            })
            .collect())
    }
}
