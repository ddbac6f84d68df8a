//! Seeded random states, channels and instruments.
//!
//! Every generator takes an explicit `u64` seed and is bitwise reproducible.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use super::channel::{QuantumChannel, QuantumInstrument};
use super::density::{DensityMatrix, Tolerances};
use super::dims::SubsystemDims;
use super::pure_state::PureState;
use crate::linalg::{self, c, CMatrix, CVector};
use crate::{Error, Result};

/// The generator behind every seeded routine in this crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian entry, `E|z|² = 1`.
fn gaussian<R: Rng>(rng: &mut R) -> linalg::C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im).unscale(core::f64::consts::SQRT_2)
}

/// `rows × cols` Ginibre matrix.
pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    // column-major fill order is part of the reproducibility contract
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

pub fn gaussian_vector<R: Rng>(len: usize, rng: &mut R) -> CVector {
    CVector::from_fn(len, |_, _| gaussian(rng))
}

/// `G G† / Tr(G G†)` with `G` a `d × rank` Ginibre matrix.
pub fn random_density(dims: SubsystemDims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_density_with(dims, rank, &mut rng(seed))
}

pub fn random_density_with<R: Rng>(dims: SubsystemDims, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let d = dims.total_dim();
    if rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    let g = ginibre(d, rank, rng);
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    Ok(DensityMatrix::from_psd(linalg::hermitize(&m.unscale(tr)), dims, Tolerances::default()))
}

/// Normalized complex Gaussian vector.
pub fn random_pure(dims: SubsystemDims, seed: u64) -> PureState {
    random_pure_with(dims, &mut rng(seed))
}

pub fn random_pure_with<R: Rng>(dims: SubsystemDims, rng: &mut R) -> PureState {
    loop {
        let v = gaussian_vector(dims.total_dim(), rng);
        if v.norm() > 1e-6 {
            if let Ok(psi) = PureState::normalized(v, dims.clone()) {
                return psi;
            }
        }
    }
}

/// `rows × cols` isometry (`cols ≤ rows`) from the QR factor of a Ginibre
/// matrix, with the phases of `R`'s diagonal absorbed so the law is Haar.
pub fn random_isometry<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            let phase = d.unscale(n);
            for i in 0..rows {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Stinespring channel: a random isometry `V : in → out ⊗ env`, cut into
/// `kraus_count` Kraus operators.
pub fn random_channel(
    dims_in: SubsystemDims,
    dims_out: SubsystemDims,
    kraus_count: usize,
    seed: u64,
) -> Result<QuantumChannel> {
    random_channel_with(dims_in, dims_out, kraus_count, &mut rng(seed))
}

pub fn random_channel_with<R: Rng>(
    dims_in: SubsystemDims,
    dims_out: SubsystemDims,
    kraus_count: usize,
    rng: &mut R,
) -> Result<QuantumChannel> {
    let kraus = random_kraus(dims_in.total_dim(), dims_out.total_dim(), kraus_count, rng)?;
    QuantumChannel::new(dims_in, dims_out, kraus)
}

fn random_kraus<R: Rng>(din: usize, dout: usize, count: usize, rng: &mut R) -> Result<Vec<CMatrix>> {
    if count == 0 || dout * count < din {
        return Err(Error::InvalidArgument("need kraus_count · d_out ≥ d_in for an isometry".into()));
    }
    let v = random_isometry(dout * count, din, rng);
    Ok((0..count).map(|k| v.rows(k * dout, dout).into_owned()).collect())
}

/// Instrument with `outcomes` branches, each holding `kraus_per_branch`
/// operators, all cut from one random isometry.
pub fn random_instrument<R: Rng>(
    dims: SubsystemDims,
    outcomes: usize,
    kraus_per_branch: usize,
    rng: &mut R,
) -> Result<QuantumInstrument> {
    let d = dims.total_dim();
    let kraus = random_kraus(d, d, outcomes * kraus_per_branch, rng)?;
    let branches = kraus.chunks(kraus_per_branch).map(<[CMatrix]>::to_vec).collect();
    QuantumInstrument::new(dims.clone(), dims, branches)
}

/// Random mixture of `terms` product pure states on `A ⊗ B`.
pub fn random_separable<R: Rng>(d_a: usize, d_b: usize, terms: usize, rng: &mut R) -> Result<DensityMatrix> {
    let dims = SubsystemDims::ab(d_a, d_b)?;
    let mut m = CMatrix::zeros(d_a * d_b, d_a * d_b);
    let mut total = 0.0;
    for _ in 0..terms {
        let w: f64 = rng.random::<f64>() + 1e-3;
        let a = gaussian_vector(d_a, rng).normalize();
        let b = gaussian_vector(d_b, rng).normalize();
        m += linalg::outer(&linalg::kron_vec(&a, &b)).scale(w);
        total += w;
    }
    Ok(DensityMatrix::from_psd(m.unscale(total), dims, Tolerances::default()))
}

/// Uniform point of the probability simplex.
pub fn random_probabilities<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    let mut p: Vec<f64> = (0..len).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = p.iter().sum();
    for x in &mut p {
        *x /= s;
    }
    p
}
