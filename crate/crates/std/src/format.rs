//! JSON state files and separable witnesses. Complex numbers are `[re, im]`.

use std::fs;
use std::path::Path;

use renyi_converse_core::entanglement::{ProductTerm, SeparableDecomposition};
use renyi_converse_core::linalg::{c, CMatrix, CVector};
use renyi_converse_core::qstate::{DensityMatrix, PureState, QuantumState, SubsystemDims};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Register {
    pub label: String,
    pub dim: usize,
}

/// `{"dims": [...], "matrix": [[[re, im], ...], ...]}` (row-major) or
/// `{"dims": [...], "vector": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<Register>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state(state: &QuantumState) -> Self {
        let dims = state
            .dims()
            .factors()
            .iter()
            .map(|(label, dim)| Register { label: label.clone(), dim: *dim })
            .collect();
        match state {
            QuantumState::Pure(p) => Self { dims, matrix: None, vector: Some(pairs(p.amplitudes().iter())) },
            QuantumState::Mixed(m) => {
                let mat = m.matrix();
                let rows = (0..mat.nrows()).map(|i| pairs(mat.row(i).iter())).collect();
                Self { dims, matrix: Some(rows), vector: None }
            }
        }
    }

    pub fn into_state(self) -> Result<QuantumState, CliError> {
        let dims = SubsystemDims::new(self.dims.into_iter().map(|r| (r.label, r.dim)))?;
        let d = dims.total_dim();
        match (self.matrix, self.vector) {
            (Some(rows), None) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(CliError::Usage(format!("state file: matrix must be {d}x{d} for dims {dims}")));
                }
                let m = CMatrix::from_fn(d, d, |i, j| c(rows[i][j][0], rows[i][j][1]));
                Ok(DensityMatrix::new(m, dims)?.into())
            }
            (None, Some(v)) => {
                if v.len() != d {
                    return Err(CliError::Usage(format!("state file: vector must have {d} entries for dims {dims}")));
                }
                let amps = CVector::from_iterator(d, v.iter().map(|z| c(z[0], z[1])));
                Ok(PureState::new(amps, dims)?.into())
            }
            _ => Err(CliError::Usage("state file: give exactly one of \"matrix\" or \"vector\"".into())),
        }
    }
}

fn pairs<'a>(it: impl Iterator<Item = &'a renyi_converse_core::linalg::C64>) -> Vec<[f64; 2]> {
    it.map(|z| [z.re, z.im]).collect()
}

pub fn read_state(path: &Path) -> Result<QuantumState, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: not a state file: {e}", path.display())))?;
    file.into_state()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessTerm {
    pub weight: f64,
    pub a_vec: Vec<[f64; 2]>,
    pub b_vec: Vec<[f64; 2]>,
}

pub fn witness_terms(sep: &SeparableDecomposition) -> Vec<WitnessTerm> {
    sep.terms()
        .iter()
        .map(|t| WitnessTerm { weight: t.weight, a_vec: pairs(t.a_vec.iter()), b_vec: pairs(t.b_vec.iter()) })
        .collect()
}

/// Rebuilds a decomposition; the caller supplies the two sides' registers.
pub fn witness_from_terms(
    terms: &[WitnessTerm],
    left: SubsystemDims,
    right: SubsystemDims,
) -> Result<SeparableDecomposition, CliError> {
    let vec = |v: &[[f64; 2]]| CVector::from_iterator(v.len(), v.iter().map(|z| c(z[0], z[1])));
    let terms = terms
        .iter()
        .map(|t| ProductTerm { weight: t.weight, a_vec: vec(&t.a_vec), b_vec: vec(&t.b_vec) })
        .collect();
    Ok(SeparableDecomposition::new(left, right, terms)?)
}
