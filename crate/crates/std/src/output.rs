//! Output records and their JSON / CSV encodings.
//!
//! Non-finite numbers are written as the strings `"inf"`, `"-inf"`, `"nan"`
//! in JSON and as bare `inf` / `-inf` / `nan` in CSV.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use renyi_converse_core::converse::ConverseBoundResult;
use renyi_converse_core::propcheck::CheckReport;
use renyi_converse_core::protocols::{ConfrontRow, ProtocolRunResult};
use serde::{Serialize, Serializer};

use crate::error::CliError;

/// A float that serializes `±∞` and NaN as strings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&fmt_num(self.0))
        }
    }
}

/// Shortest round-trip decimal, or `inf` / `-inf` / `nan`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Where results go: `--out PATH` or standard output.
pub struct Sink {
    pub format: Format,
    pub path: Option<PathBuf>,
}

impl Sink {
    fn write(&self, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
        match &self.path {
            Some(p) => fs::write(p, bytes)?,
            None => stdout.write_all(bytes)?,
        }
        Ok(())
    }

    pub fn emit<R: Record>(&self, records: &[R], stdout: &mut dyn Write) -> Result<(), CliError> {
        let bytes = match self.format {
            Format::Json => {
                let mut v = serde_json::to_vec_pretty(records)?;
                v.push(b'\n');
                v
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(R::HEADER)?;
                for r in records {
                    w.write_record(r.csv_row())?;
                }
                w.into_inner().map_err(|e| CliError::Io(e.into_error()))?
            }
        };
        self.write(&bytes, stdout)
    }
}

/// A row type with a fixed CSV header.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
    fn csv_row(&self) -> Vec<String>;
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyRecord {
    pub alpha: Num,
    pub register: String,
    pub entropy: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherent_info_ab: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherent_info_ba: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_entropy: Option<Num>,
}

impl Record for EntropyRecord {
    const HEADER: &'static [&'static str] =
        &["alpha", "register", "entropy", "coherent_info_ab", "coherent_info_ba", "relative_entropy"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            fmt_num(self.alpha.0),
            self.register.clone(),
            fmt_num(self.entropy.0),
            fmt_opt(self.coherent_info_ab.map(|n| n.0)),
            fmt_opt(self.coherent_info_ba.map(|n| n.0)),
            fmt_opt(self.relative_entropy.map(|n| n.0)),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RreeRecord {
    pub alpha: f64,
    pub lower: Num,
    pub analytic_upper: Option<f64>,
    pub estimate: Num,
    pub weak_regime: bool,
    pub iterations: usize,
}

impl Record for RreeRecord {
    const HEADER: &'static [&'static str] = &["alpha", "lower", "analytic_upper", "estimate", "weak_regime", "iterations"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            fmt_num(self.alpha),
            fmt_num(self.lower.0),
            fmt_opt(self.analytic_upper),
            fmt_num(self.estimate.0),
            self.weak_regime.to_string(),
            self.iterations.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConverseRecord {
    pub theorem: String,
    pub alpha: f64,
    pub n: u64,
    pub rate: f64,
    pub rate_params: BTreeMap<String, f64>,
    pub exponent_per_copy: Num,
    #[serde(rename = "log_F_bound")]
    pub log_f_bound: Num,
    pub vacuous: bool,
    pub terms: BTreeMap<String, Num>,
}

impl From<&ConverseBoundResult> for ConverseRecord {
    fn from(b: &ConverseBoundResult) -> Self {
        Self {
            theorem: b.theorem_id.name().into(),
            alpha: b.alpha,
            n: b.n,
            rate: b.rate,
            rate_params: b.rate_params.iter().map(|(k, v)| ((*k).into(), *v)).collect(),
            exponent_per_copy: Num(b.exponent_per_copy),
            log_f_bound: Num(b.log_fidelity_bound),
            vacuous: b.vacuous,
            terms: b.term_breakdown.iter().map(|(k, v)| (k.clone(), Num(*v))).collect(),
        }
    }
}

impl Record for ConverseRecord {
    const HEADER: &'static [&'static str] =
        &["theorem", "alpha", "n", "rate", "exponent_per_copy", "log_F_bound", "vacuous"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.theorem.clone(),
            fmt_num(self.alpha),
            self.n.to_string(),
            fmt_num(self.rate),
            fmt_num(self.exponent_per_copy.0),
            fmt_num(self.log_f_bound.0),
            self.vacuous.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolRecord {
    pub protocol: String,
    pub n: u64,
    pub rate: f64,
    pub log_size: f64,
    pub eta: f64,
    pub fidelity_lower: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_yield_rate: Option<f64>,
}

impl From<&ProtocolRunResult> for ProtocolRecord {
    fn from(r: &ProtocolRunResult) -> Self {
        Self {
            protocol: r.protocol.name().into(),
            n: r.n,
            rate: r.rate,
            log_size: r.log_size,
            eta: r.eta,
            fidelity_lower: r.fidelity_lower,
            fidelity_exact: r.fidelity_exact,
            success_prob: r.success_prob,
            mean_yield_rate: r.mean_yield_rate(),
        }
    }
}

impl Record for ProtocolRecord {
    const HEADER: &'static [&'static str] =
        &["protocol", "n", "rate", "log_size", "eta", "fidelity_lower", "fidelity_exact", "success_prob"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.protocol.clone(),
            self.n.to_string(),
            fmt_num(self.rate),
            fmt_num(self.log_size),
            fmt_num(self.eta),
            fmt_num(self.fidelity_lower),
            fmt_opt(self.fidelity_exact),
            fmt_opt(self.success_prob),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfrontRecord {
    pub theorem: String,
    pub n: u64,
    pub rate: f64,
    pub alpha: f64,
    pub achieved: Option<f64>,
    pub fidelity_bound: f64,
    #[serde(rename = "log_F_bound")]
    pub log_f_bound: Num,
    pub exponent_per_copy: Num,
    pub status: String,
}

impl From<&ConfrontRow> for ConfrontRecord {
    fn from(r: &ConfrontRow) -> Self {
        Self {
            theorem: r.bound.theorem_id.name().into(),
            n: r.n,
            rate: r.rate,
            alpha: r.bound.alpha,
            achieved: r.achieved,
            fidelity_bound: r.fidelity_bound,
            log_f_bound: Num(r.bound.log_fidelity_bound),
            exponent_per_copy: Num(r.bound.exponent_per_copy),
            status: r.status.name().into(),
        }
    }
}

impl Record for ConfrontRecord {
    const HEADER: &'static [&'static str] =
        &["theorem", "n", "rate", "alpha", "achieved", "fidelity_bound", "log_F_bound", "exponent_per_copy", "status"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.theorem.clone(),
            self.n.to_string(),
            fmt_num(self.rate),
            fmt_num(self.alpha),
            fmt_opt(self.achieved),
            fmt_num(self.fidelity_bound),
            fmt_num(self.log_f_bound.0),
            fmt_num(self.exponent_per_copy.0),
            self.status.clone(),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub trials: usize,
    pub worst_margin: Num,
    pub failures: Vec<(u64, Num)>,
    pub tolerance: f64,
    pub seed: u64,
    pub ok: bool,
}

impl From<&CheckReport> for CheckRecord {
    fn from(r: &CheckReport) -> Self {
        Self {
            check_id: r.check_id.name().into(),
            trials: r.trials,
            worst_margin: Num(r.worst_margin),
            failures: r.failures.iter().map(|&(s, m)| (s, Num(m))).collect(),
            tolerance: r.tolerance,
            seed: r.seed,
            ok: r.ok(),
        }
    }
}

impl Record for CheckRecord {
    const HEADER: &'static [&'static str] = &["check_id", "trials", "worst_margin", "failures", "tolerance", "seed", "ok"];

    fn csv_row(&self) -> Vec<String> {
        vec![
            self.check_id.clone(),
            self.trials.to_string(),
            fmt_num(self.worst_margin.0),
            self.failures.len().to_string(),
            fmt_num(self.tolerance),
            self.seed.to_string(),
            self.ok.to_string(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinities_are_strings() {
        assert_eq!(serde_json::to_string(&Num(f64::INFINITY)).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Num(0.25)).unwrap(), "0.25");
        assert_eq!(fmt_num(-0.0078125), "-0.0078125");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
    }
}
